#include "endspace/source.hpp"

#include <algorithm>
#include <map>

#include "endspace/core.hpp"
#include "source_detail.hpp"

namespace endspace {

VSet normalize_vset(VSet x) {
    std::sort(x.begin(), x.end());
    x.erase(std::unique(x.begin(), x.end()), x.end());
    return x;
}

VSet prefix_vset(std::size_t n) {
    VSet x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = i;
    return x;
}

std::string component_id(std::size_t rep_index) {
    return "C" + std::to_string(rep_index);
}

std::optional<std::size_t> parse_component_id(const std::string& id) {
    if (id.size() < 2 || id[0] != 'C') return std::nullopt;
    std::size_t v = 0;
    for (std::size_t i = 1; i < id.size(); ++i) {
        if (id[i] < '0' || id[i] > '9') return std::nullopt;
        v = v * 10 + static_cast<std::size_t>(id[i] - '0');
    }
    if (id.size() > 2 && id[1] == '0') return std::nullopt; // no leading zeros
    return v;
}

const ComponentInfo* ComponentAnswer::find(const std::string& id) const {
    for (const auto& c : components)
        if (c.id == id) return &c;
    return nullptr;
}

std::optional<std::string> ComponentAnswer::label_of(const std::string& vertex) const {
    for (const auto& [v, c] : labels)
        if (v == vertex) return c;
    return std::nullopt;
}

bool Source::in_named_set(const std::string& set, std::size_t) const {
    throw Error(Err::BadParams, kind() + " source has no named set \"" + set + "\"");
}

TraceAnswer Source::named_trace(const std::string& set, const VSet&,
                                const ComponentInfo& comp) const {
    if (!comp.size.infinite) return TraceAnswer{comp.size, Certainty::Exact};
    throw Error(Err::BadParams, kind() + " source has no named set \"" + set + "\"");
}

CustomLevel Source::custom_level(std::size_t) const {
    throw InternalError("source carries no partition chain");
}

std::string Source::custom_class_of(std::size_t, std::size_t) const {
    throw InternalError("source carries no partition chain");
}

std::size_t Source::clamp(std::size_t n) const {
    auto c = vertex_count();
    return c ? std::min(n, *c) : n;
}

std::optional<std::size_t> Source::find_vertex_index(const std::string& id,
                                                     std::size_t bound) const {
    std::size_t b = clamp(bound);
    for (std::size_t i = 0; i < b; ++i)
        if (vertex(i) == id) return i;
    return std::nullopt;
}

std::string USet::display() const {
    switch (kind) {
    case Kind::All: return "all";
    case Kind::Named: return name;
    case Kind::Explicit: {
        std::string s;
        for (const auto& v : vertices) {
            if (!s.empty()) s += ',';
            s += v;
        }
        return s;
    }
    }
    return "all";
}

bool uset_contains(const Source& s, const USet& u, std::size_t vertex_index) {
    switch (u.kind) {
    case USet::Kind::All: return true;
    case USet::Kind::Named: return s.in_named_set(u.name, vertex_index);
    case USet::Kind::Explicit: {
        const std::string id = s.vertex(vertex_index);
        return std::find(u.vertices.begin(), u.vertices.end(), id) !=
               u.vertices.end();
    }
    }
    return false;
}

TraceAnswer uset_trace(const Source& s, const USet& u, const VSet& x,
                       const ComponentInfo& comp) {
    switch (u.kind) {
    case USet::Kind::All: return TraceAnswer{comp.size, Certainty::Exact};
    case USet::Kind::Named: return s.named_trace(u.name, x, comp);
    case USet::Kind::Explicit:
        return TraceAnswer{Card::fin(u.vertices.size()), Certainty::Exact};
    }
    return TraceAnswer{comp.size, Certainty::Exact};
}

USet parse_uset(const Source& s, const std::string& spec) {
    if (spec.empty() || spec == "all") return USet::all();
    const auto named = s.named_sets();
    if (std::find(named.begin(), named.end(), spec) != named.end())
        return USet::named(spec);
    std::vector<std::string> verts;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        std::size_t comma = spec.find(',', pos);
        if (comma == std::string::npos) comma = spec.size();
        std::string tok = spec.substr(pos, comma - pos);
        if (tok.empty())
            throw Error(Err::BadParams, "empty vertex in set spec \"" + spec + "\"");
        verts.push_back(std::move(tok));
        pos = comma + 1;
    }
    const std::size_t scan_bound = s.vertex_count() ? *s.vertex_count() : 4096;
    for (const auto& v : verts)
        if (!s.find_vertex_index(v, scan_bound))
            throw Error(Err::UnknownVertex, "unknown vertex \"" + v + "\" in set spec");
    return USet::explicit_set(std::move(verts));
}

SolidityReport solidity_check(const Source& s, const VSet& x, std::size_t window) {
    const VSet xs = normalize_vset(x);
    ComponentAnswer ans = s.components(xs, window);
    SolidityReport r;
    for (std::size_t i : xs) r.x_ids.push_back(s.vertex(i));
    r.count = ans.count;
    r.solid = !ans.count.infinite;
    r.certainty = ans.certainty;
    return r;
}

namespace detail {

SubScc scc_minus(const MultiDigraph& g, const VSet& x) {
    const int n = g.vertex_count();
    SubScc r;
    r.in_x.assign(static_cast<std::size_t>(n), 0);
    for (std::size_t i : x) {
        if (i >= static_cast<std::size_t>(n))
            throw InternalError("separator index beyond truncation");
        r.in_x[i] = 1;
    }
    MultiDigraph h;
    for (int v = 0; v < n; ++v) h.add_vertex(g.vertex_id(v));
    for (const Edge& e : g.edges())
        if (!r.in_x[static_cast<std::size_t>(e.tail)] &&
            !r.in_x[static_cast<std::size_t>(e.head)])
            h.add_edge_by_index(e.id, e.tail, e.head, e.kind, e.origin);
    const SccResult s = strong_components(h);
    std::vector<std::vector<int>> buckets(static_cast<std::size_t>(s.count()));
    for (int v = 0; v < n; ++v)
        if (!r.in_x[static_cast<std::size_t>(v)])
            buckets[static_cast<std::size_t>(s.component_of[v])].push_back(v);
    for (auto& b : buckets) {
        if (b.empty()) continue;
        CompGroup grp;
        grp.rep = static_cast<std::size_t>(b.front());
        grp.members = std::move(b);
        r.groups.push_back(std::move(grp));
    }
    std::sort(r.groups.begin(), r.groups.end(),
              [](const CompGroup& a, const CompGroup& b) { return a.rep < b.rep; });
    r.group_of.assign(static_cast<std::size_t>(n), -1);
    for (std::size_t gi = 0; gi < r.groups.size(); ++gi)
        for (int v : r.groups[gi].members)
            r.group_of[static_cast<std::size_t>(v)] = static_cast<int>(gi);
    return r;
}

// Resolves a bundle endpoint: either a vertex of x or a component id valid
// for the given decomposition.
EndpointRef resolve_endpoint(const Source& s, const MultiDigraph& trunc,
                             const SubScc& sub, const VSet& x,
                             const std::string& token) {
    if (auto rep = parse_component_id(token)) {
        if (*rep < sub.group_of.size()) {
            int gi = sub.group_of[*rep];
            if (gi >= 0 && sub.groups[static_cast<std::size_t>(gi)].rep == *rep)
                return EndpointRef{false, static_cast<std::size_t>(gi)};
        }
        throw Error(Err::UnknownComponent,
                    "no component " + token + " at this separator");
    }
    auto vi = trunc.find_vertex(token);
    if (!vi) {
        // The scan window always covers every separator vertex, so a vertex
        // beyond it cannot belong to x.
        if (s.find_vertex_index(token,
                                2 * static_cast<std::size_t>(trunc.vertex_count())))
            throw Error(Err::BadParams,
                        "bundle endpoint \"" + token +
                            "\" is neither a separator vertex nor a component id");
        throw Error(Err::UnknownVertex, "unknown vertex \"" + token + "\"");
    }
    const std::size_t idx = static_cast<std::size_t>(*vi);
    if (std::find(x.begin(), x.end(), idx) == x.end())
        throw Error(Err::BadParams,
                    "bundle endpoint \"" + token +
                        "\" is neither a separator vertex nor a component id");
    return EndpointRef{true, idx};
}

// Shared windowed bundle scan: collect edges of trunc from class a to class b.
std::vector<SourceEdgeRef> scan_bundle(const MultiDigraph& trunc,
                                       const SubScc& sub, const EndpointRef& a,
                                       const EndpointRef& b) {
    auto member = [&](const EndpointRef& r, int v) {
        if (r.is_vertex) return static_cast<std::size_t>(v) == r.index;
        return sub.group_of[static_cast<std::size_t>(v)] ==
               static_cast<int>(r.index);
    };
    std::vector<SourceEdgeRef> out;
    for (const Edge& e : trunc.edges())
        if (member(a, e.tail) && member(b, e.head))
            out.push_back(SourceEdgeRef{e.id, trunc.vertex_id(e.tail),
                                        trunc.vertex_id(e.head)});
    return out;
}

// ---------------------------------------------------------------------------
// Finite sources: every oracle defers to exact computation on the full graph.

namespace {

class FiniteSource final : public Source {
public:
    explicit FiniteSource(
        const std::vector<std::pair<std::string, std::string>>& edge_tokens) {
        for (const auto& [a, b] : edge_tokens) {
            if (!graph_.find_vertex(a)) graph_.add_vertex(a);
            if (!graph_.find_vertex(b)) graph_.add_vertex(b);
            std::string id = a + ">" + b;
            auto& n = parallel_count_[id];
            ++n;
            if (n > 1) id += "#" + std::to_string(n);
            graph_.add_edge(id, a, b);
        }
    }

    std::string kind() const override { return "finite"; }

    std::optional<std::size_t> vertex_count() const override {
        return static_cast<std::size_t>(graph_.vertex_count());
    }

    std::string vertex(std::size_t i) const override {
        if (i >= static_cast<std::size_t>(graph_.vertex_count()))
            throw Error(Err::UnknownVertex,
                        "vertex index " + std::to_string(i) + " out of range");
        return graph_.vertex_id(static_cast<int>(i));
    }

    MultiDigraph truncation(std::size_t n) const override {
        const std::size_t m = clamp(n);
        MultiDigraph g;
        for (std::size_t i = 0; i < m; ++i)
            g.add_vertex(graph_.vertex_id(static_cast<int>(i)));
        for (const Edge& e : graph_.edges())
            if (e.tail < static_cast<int>(m) && e.head < static_cast<int>(m))
                g.add_edge_by_index(e.id, e.tail, e.head);
        return g;
    }

    ComponentAnswer components(const VSet& x, std::size_t window) const override {
        check_x(x);
        const SubScc sub = scc_minus(graph_, x);
        ComponentAnswer ans;
        for (const CompGroup& grp : sub.groups)
            ans.components.push_back(ComponentInfo{
                component_id(grp.rep), grp.rep, Card::fin(grp.members.size())});
        const std::size_t lim =
            std::min<std::size_t>(window, static_cast<std::size_t>(graph_.vertex_count()));
        for (std::size_t i = 0; i < lim; ++i)
            if (!sub.in_x[i])
                ans.labels.emplace_back(
                    graph_.vertex_id(static_cast<int>(i)),
                    component_id(sub.groups[static_cast<std::size_t>(
                                                sub.group_of[i])].rep));
        ans.count = Card::fin(sub.groups.size());
        ans.all_finite = true;
        ans.certainty = Certainty::Exact;
        return ans;
    }

    BundleAnswer bundle(const VSet& x, const std::string& a,
                        const std::string& b) const override {
        check_x(x);
        const SubScc sub = scc_minus(graph_, x);
        const EndpointRef ra = resolve_endpoint(*this, graph_, sub, x, a);
        const EndpointRef rb = resolve_endpoint(*this, graph_, sub, x, b);
        if (ra.is_vertex == rb.is_vertex && ra.index == rb.index)
            throw Error(Err::BadParams, "bundle endpoints must differ");
        BundleAnswer ans;
        ans.edges = scan_bundle(graph_, sub, ra, rb);
        ans.certainty = Certainty::Exact;
        return ans;
    }

    DegreeAnswer degrees(std::size_t i) const override {
        if (i >= static_cast<std::size_t>(graph_.vertex_count()))
            throw Error(Err::UnknownVertex,
                        "vertex index " + std::to_string(i) + " out of range");
        return DegreeAnswer{
            Card::fin(static_cast<std::uint64_t>(graph_.in_degree(static_cast<int>(i)))),
            Card::fin(static_cast<std::uint64_t>(graph_.out_degree(static_cast<int>(i)))),
            Certainty::Exact};
    }

private:
    void check_x(const VSet& x) const {
        for (std::size_t i : x)
            if (i >= static_cast<std::size_t>(graph_.vertex_count()))
                throw Error(Err::UnknownVertex,
                            "separator index " + std::to_string(i) + " out of range");
    }

    MultiDigraph graph_;
    std::map<std::string, int> parallel_count_;
};

// ---------------------------------------------------------------------------
// Stencil sources: width-k layered digraphs given by per-layer edge rules.
// Oracles evaluate growing truncations and compare two consecutive one-layer
// extensions; answers are Provisional unless the window is stable under both.

class StencilSource final : public Source {
public:
    StencilSource(std::size_t width, std::vector<StencilRule> rules)
        : width_(width), rules_(std::move(rules)) {}

    std::string kind() const override { return "stencil"; }
    std::optional<std::size_t> vertex_count() const override { return std::nullopt; }

    std::string vertex(std::size_t i) const override {
        return std::to_string(i / width_) + "." + std::to_string(i % width_);
    }

    MultiDigraph truncation(std::size_t n) const override {
        MultiDigraph g;
        for (std::size_t i = 0; i < n; ++i) g.add_vertex(vertex(i));
        struct Inst {
            std::size_t max_idx, rule, tail, head;
        };
        std::vector<Inst> inst;
        for (std::size_t r = 0; r < rules_.size(); ++r) {
            const StencilRule& rule = rules_[r];
            const std::size_t t0 =
                rule.shift < 0 ? static_cast<std::size_t>(-rule.shift) : 0;
            for (std::size_t t = t0;; ++t) {
                const std::size_t tail = t * width_ + rule.from_slot;
                const std::size_t head =
                    static_cast<std::size_t>(static_cast<long long>(t) + rule.shift) *
                        width_ +
                    rule.to_slot;
                if (tail >= n || head >= n) {
                    // Rules only reach one layer ahead or back; once both
                    // endpoints overflow they overflow for all larger t.
                    if (tail >= n + 2 * width_) break;
                    continue;
                }
                inst.push_back(Inst{std::max(tail, head), r, tail, head});
            }
        }
        std::sort(inst.begin(), inst.end(), [](const Inst& a, const Inst& b) {
            if (a.max_idx != b.max_idx) return a.max_idx < b.max_idx;
            if (a.rule != b.rule) return a.rule < b.rule;
            return a.tail < b.tail;
        });
        std::map<std::pair<std::size_t, std::size_t>, int> seen;
        for (const Inst& e : inst) {
            std::string id = vertex(e.tail) + ">" + vertex(e.head);
            auto& cnt = seen[{e.tail, e.head}];
            ++cnt;
            if (cnt > 1) id += "#" + std::to_string(cnt);
            g.add_edge_by_index(id, static_cast<int>(e.tail),
                                static_cast<int>(e.head));
        }
        return g;
    }

    ComponentAnswer components(const VSet& x, std::size_t window) const override {
        const std::size_t t0 = stable_base(x, window);
        const MultiDigraph g1 = truncation(t0 + width_);
        const MultiDigraph g2 = truncation(t0 + 2 * width_);
        const SubScc sub0 = scc_minus(truncation(t0), x);
        const SubScc sub1 = scc_minus(g1, x);
        const SubScc sub2 = scc_minus(g2, x);

        bool stable = sub0.groups.size() == sub1.groups.size() &&
                      sub1.groups.size() == sub2.groups.size();
        for (std::size_t i = 0; i < t0 && stable; ++i) {
            if (sub0.in_x[i]) continue;
            const std::size_t r0 = sub0.groups[static_cast<std::size_t>(
                                                   sub0.group_of[i])].rep;
            const std::size_t r1 = sub1.groups[static_cast<std::size_t>(
                                                   sub1.group_of[i])].rep;
            const std::size_t r2 = sub2.groups[static_cast<std::size_t>(
                                                   sub2.group_of[i])].rep;
            stable = r0 == r1 && r1 == r2;
        }

        ComponentAnswer ans;
        for (const CompGroup& grp : sub2.groups) {
            if (grp.rep >= t0) continue; // frontier artifact
            const Card size = group_size(sub1, grp);
            ans.components.push_back(ComponentInfo{component_id(grp.rep), grp.rep, size});
        }
        for (std::size_t i = 0; i < std::min(window, t0); ++i)
            if (!sub2.in_x[i])
                ans.labels.emplace_back(
                    vertex(i), component_id(sub2.groups[static_cast<std::size_t>(
                                                            sub2.group_of[i])].rep));
        if (stable)
            ans.count = Card::fin(sub2.groups.size());
        else
            ans.count = Card::inf();
        bool any_infinite = false;
        for (const auto& c : ans.components) any_infinite |= c.size.infinite;
        ans.all_finite = !any_infinite;
        ans.certainty = stable ? Certainty::Exact : Certainty::Provisional;
        return ans;
    }

    BundleAnswer bundle(const VSet& x, const std::string& a,
                        const std::string& b) const override {
        std::size_t hint = 0;
        if (auto r = parse_component_id(a)) hint = std::max(hint, *r + 1);
        if (auto r = parse_component_id(b)) hint = std::max(hint, *r + 1);
        const std::size_t t0 = stable_base(x, hint);
        const MultiDigraph g = truncation(t0 + 2 * width_);
        const SubScc sub = scc_minus(g, x);
        const EndpointRef ra = resolve_endpoint(*this, g, sub, x, a);
        const EndpointRef rb = resolve_endpoint(*this, g, sub, x, b);
        if (ra.is_vertex == rb.is_vertex && ra.index == rb.index)
            throw Error(Err::BadParams, "bundle endpoints must differ");
        const std::vector<SourceEdgeRef> edges = scan_bundle(g, sub, ra, rb);
        // Persistence heuristic: crossing edges reaching into each of the
        // last two layers mean an unbounded bundle.
        std::size_t hits_last = 0, hits_prev = 0;
        for (const SourceEdgeRef& e : edges) {
            const std::size_t tail = index_of(g, e.tail);
            const std::size_t head = index_of(g, e.head);
            const std::size_t hi = std::max(tail, head);
            if (hi >= t0 + width_)
                ++hits_last;
            else if (hi >= t0)
                ++hits_prev;
        }
        BundleAnswer ans;
        if (hits_last > 0 && hits_prev > 0) {
            ans.infinite = true;
        } else {
            ans.edges = edges;
        }
        ans.certainty = Certainty::Provisional;
        return ans;
    }

    DegreeAnswer degrees(std::size_t i) const override {
        const std::size_t t = i / width_;
        const MultiDigraph g = truncation((t + 2) * width_);
        return DegreeAnswer{
            Card::fin(static_cast<std::uint64_t>(g.in_degree(static_cast<int>(i)))),
            Card::fin(static_cast<std::uint64_t>(g.out_degree(static_cast<int>(i)))),
            Certainty::Exact};
    }

private:
    // Window start: full layers past every separator and the request.
    std::size_t stable_base(const VSet& x, std::size_t window) const {
        const std::size_t maxx = x.empty() ? 0 : x.back() + 1;
        std::size_t need = std::max(
            {window, maxx, 4 * width_ * (x.size() + 1)});
        const std::size_t layers = need / width_ + 2;
        return layers * width_;
    }

    static Card group_size(const SubScc& prev, const CompGroup& grp) {
        if (grp.rep < prev.group_of.size()) {
            const int gi = prev.group_of[grp.rep];
            if (gi >= 0) {
                const CompGroup& pg = prev.groups[static_cast<std::size_t>(gi)];
                if (pg.rep == grp.rep && pg.members.size() < grp.members.size())
                    return Card::inf();
            }
        }
        return Card::fin(grp.members.size());
    }

    static std::size_t index_of(const MultiDigraph& g, const std::string& id) {
        return static_cast<std::size_t>(g.require_vertex(id));
    }

    std::size_t width_;
    std::vector<StencilRule> rules_;
};

} // namespace

SourcePtr make_finite_source(
    const std::vector<std::pair<std::string, std::string>>& edge_tokens) {
    return std::make_shared<FiniteSource>(edge_tokens);
}

SourcePtr make_stencil_source(std::size_t width,
                              const std::vector<StencilRule>& rules) {
    if (width == 0) throw Error(Err::SemanticError, "stencil width must be positive");
    for (const StencilRule& r : rules) {
        if (r.shift < -1 || r.shift > 1)
            throw Error(Err::SemanticError, "stencil offset outside {-1,0,+1}");
        if (r.from_slot >= width || r.to_slot >= width)
            throw Error(Err::SemanticError, "stencil slot outside [0,width)");
        if (r.shift == 0 && r.from_slot == r.to_slot)
            throw Error(Err::LoopForbidden, "stencil rule would create loops");
    }
    return std::make_shared<StencilSource>(width, rules);
}

} // namespace detail
} // namespace endspace
