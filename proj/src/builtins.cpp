#include <algorithm>
#include <charconv>

#include "endspace/core.hpp"
#include "endspace/source.hpp"
#include "source_detail.hpp"

namespace endspace {
namespace {

using detail::CompGroup;
using detail::EndpointRef;
using detail::SubScc;

// Common machinery for the builtin families.  Each builtin enumerates its
// vertices with bounded strong-connectivity locality: two vertices in a
// common cycle have enumeration indices within locality() of each other,
// except through one-way hub edges (star centers), which never create
// cycles.  That makes windowed strong components exact: a component is
// infinite iff it reaches past every separator's disturbance zone.
class BuiltinSource : public Source {
public:
    std::optional<std::size_t> vertex_count() const override { return std::nullopt; }

    MultiDigraph truncation(std::size_t n) const override {
        MultiDigraph g;
        for (std::size_t k = 0; k < n; ++k) {
            g.add_vertex(vertex(k));
            for (const Arc& a : arcs_at(k))
                g.add_edge_by_index(vertex(a.tail) + ">" + vertex(a.head),
                                    static_cast<int>(a.tail),
                                    static_cast<int>(a.head));
        }
        return g;
    }

    ComponentAnswer components(const VSet& x, std::size_t window) const override {
        const std::size_t maxx = x.empty() ? 0 : x.back() + 1;
        const std::size_t t = std::max(window, maxx) + margin();
        const MultiDigraph g = truncation(t);
        const SubScc sub = detail::scc_minus(g, x);
        const std::size_t fr = frontier(x);
        // Groups born inside the last locality() indices are truncation
        // artifacts: pieces of the tail whose cycles are cut off mid-window.
        const std::size_t cap = all_singleton()
                                    ? std::max(window, maxx + locality() + 1)
                                    : t - locality() - 1;
        ComponentAnswer ans;
        for (const CompGroup& grp : sub.groups) {
            if (grp.rep >= cap) continue;
            const bool inf =
                !all_singleton() &&
                static_cast<std::size_t>(grp.members.back()) >= fr;
            ans.components.push_back(ComponentInfo{
                component_id(grp.rep), grp.rep,
                inf ? Card::inf() : Card::fin(grp.members.size())});
        }
        for (std::size_t i = 0; i < std::min(window, t); ++i)
            if (!sub.in_x[i])
                ans.labels.emplace_back(
                    vertex(i),
                    component_id(sub.groups[static_cast<std::size_t>(
                                                sub.group_of[i])].rep));
        ans.count =
            all_singleton() ? Card::inf() : Card::fin(ans.components.size());
        ans.all_finite = all_singleton();
        ans.certainty = Certainty::Exact;
        return ans;
    }

    BundleAnswer bundle(const VSet& x, const std::string& a,
                        const std::string& b) const override {
        std::size_t hint = x.empty() ? 0 : x.back() + 1;
        if (auto r = parse_component_id(a)) hint = std::max(hint, *r + 1);
        if (auto r = parse_component_id(b)) hint = std::max(hint, *r + 1);
        const MultiDigraph g = truncation(hint + margin());
        const SubScc sub = detail::scc_minus(g, x);
        const EndpointRef ra = detail::resolve_endpoint(*this, g, sub, x, a);
        const EndpointRef rb = detail::resolve_endpoint(*this, g, sub, x, b);
        if (ra.is_vertex == rb.is_vertex && ra.index == rb.index)
            throw Error(Err::BadParams, "bundle endpoints must differ");
        BundleAnswer ans;
        if (infinite_bundle(class_ref(sub, x, ra), class_ref(sub, x, rb))) {
            ans.infinite = true;
            return ans;
        }
        ans.edges = detail::scan_bundle(g, sub, ra, rb);
        return ans;
    }

    DegreeAnswer degrees(std::size_t i) const override {
        const MultiDigraph g = truncation(i + locality() + 2);
        Card out = Card::fin(
            static_cast<std::uint64_t>(g.out_degree(static_cast<int>(i))));
        if (auto ov = out_override(i)) out = *ov;
        return DegreeAnswer{
            Card::fin(static_cast<std::uint64_t>(g.in_degree(static_cast<int>(i)))),
            out, Certainty::Exact};
    }

protected:
    struct Arc {
        std::size_t tail, head;
    };

    // Identity of a resolved bundle endpoint: a separator vertex (index) or
    // a component (rep index), with the component's finiteness.
    struct ClassRef {
        bool is_vertex = false;
        std::size_t index = 0;
        bool infinite = false;
    };

    virtual std::size_t locality() const = 0;
    virtual bool all_singleton() const = 0;
    // Arcs whose later endpoint is k; both endpoints are <= k.
    virtual std::vector<Arc> arcs_at(std::size_t k) const = 0;
    virtual bool infinite_bundle(const ClassRef&, const ClassRef&) const {
        return false;
    }
    virtual std::optional<Card> out_override(std::size_t) const {
        return std::nullopt;
    }

    std::size_t margin() const { return 3 * (locality() + 1) + 4; }

    // Components with a member past this index continue into the tail.
    std::size_t frontier(const VSet& x) const {
        return (x.empty() ? 0 : x.back() + 1) + locality();
    }

    ClassRef class_ref(const SubScc& sub, const VSet& x, const EndpointRef& r) const {
        if (r.is_vertex) return ClassRef{true, r.index, false};
        const CompGroup& grp = sub.groups[r.index];
        const bool inf = !all_singleton() &&
                         static_cast<std::size_t>(grp.members.back()) >=
                             frontier(x);
        return ClassRef{false, grp.rep, inf};
    }

    SourceEdgeRef arc_ref(std::size_t tail, std::size_t head) const {
        return SourceEdgeRef{vertex(tail) + ">" + vertex(head), vertex(tail),
                             vertex(head)};
    }
};

// v0 -> v1 -> v2 -> ...
class RaySource final : public BuiltinSource {
public:
    std::string kind() const override { return "ray"; }
    std::string vertex(std::size_t i) const override {
        return "v" + std::to_string(i);
    }

    bool has_custom_chain() const override { return true; }

    CustomLevel custom_level(std::size_t n) const override {
        CustomLevel lv;
        for (std::size_t i = 0; i < n; ++i)
            lv.classes.push_back(
                ClassSpec{vertex(i), true, vertex(i), i, Card::fin(1)});
        lv.classes.push_back(
            ClassSpec{component_id(n), false, "", n, Card::inf()});
        for (std::size_t i = 0; i + 1 < n; ++i)
            lv.bundles.push_back(
                BundleSpec{vertex(i), vertex(i + 1), false, {arc_ref(i, i + 1)}});
        if (n >= 1)
            lv.bundles.push_back(BundleSpec{
                vertex(n - 1), component_id(n), false, {arc_ref(n - 1, n)}});
        return lv;
    }

    std::string custom_class_of(std::size_t n, std::size_t i) const override {
        return i < n ? vertex(i) : component_id(n);
    }

protected:
    std::size_t locality() const override { return 1; }
    bool all_singleton() const override { return true; }
    std::vector<Arc> arcs_at(std::size_t k) const override {
        if (k == 0) return {};
        return {Arc{k - 1, k}};
    }
};

// ... -> v2 -> v1 -> v0
class ReverseRaySource final : public BuiltinSource {
public:
    std::string kind() const override { return "reverse-ray"; }
    std::string vertex(std::size_t i) const override {
        return "v" + std::to_string(i);
    }

    bool has_custom_chain() const override { return true; }

    CustomLevel custom_level(std::size_t n) const override {
        CustomLevel lv;
        for (std::size_t i = 0; i < n; ++i)
            lv.classes.push_back(
                ClassSpec{vertex(i), true, vertex(i), i, Card::fin(1)});
        lv.classes.push_back(
            ClassSpec{component_id(n), false, "", n, Card::inf()});
        for (std::size_t i = 0; i + 1 < n; ++i)
            lv.bundles.push_back(
                BundleSpec{vertex(i + 1), vertex(i), false, {arc_ref(i + 1, i)}});
        if (n >= 1)
            lv.bundles.push_back(BundleSpec{
                component_id(n), vertex(n - 1), false, {arc_ref(n, n - 1)}});
        return lv;
    }

    std::string custom_class_of(std::size_t n, std::size_t i) const override {
        return i < n ? vertex(i) : component_id(n);
    }

protected:
    std::size_t locality() const override { return 1; }
    bool all_singleton() const override { return true; }
    std::vector<Arc> arcs_at(std::size_t k) const override {
        if (k == 0) return {};
        return {Arc{k, k - 1}};
    }
};

// u0 <-> u1 <-> u2 <-> ...
class SymmetricRaySource final : public BuiltinSource {
public:
    std::string kind() const override { return "symmetric-ray"; }
    std::string vertex(std::size_t i) const override {
        return "u" + std::to_string(i);
    }

protected:
    std::size_t locality() const override { return 1; }
    bool all_singleton() const override { return false; }
    std::vector<Arc> arcs_at(std::size_t k) const override {
        if (k == 0) return {};
        return {Arc{k - 1, k}, Arc{k, k - 1}};
    }
};

// ... -> -1 -> 0 -> 1 -> ...; enumerated 0, 1, -1, 2, -2, ...
class ZChainSource final : public BuiltinSource {
public:
    std::string kind() const override { return "zchain"; }

    std::string vertex(std::size_t i) const override {
        return std::to_string(value_of(i));
    }

    bool has_custom_chain() const override { return true; }

    CustomLevel custom_level(std::size_t n) const override {
        CustomLevel lv;
        if (n == 0) {
            // Split at 0/1: one edge crosses forward, none backward.
            lv.classes.push_back(
                ClassSpec{component_id(0), false, "", 0, Card::inf()});
            lv.classes.push_back(
                ClassSpec{component_id(1), false, "", 1, Card::inf()});
            lv.bundles.push_back(BundleSpec{component_id(0), component_id(1),
                                            false,
                                            {arc_ref(index_of(0), index_of(1))}});
            return lv;
        }
        const long long hi = static_cast<long long>(n / 2);
        const long long lo = -static_cast<long long>((n - 1) / 2);
        const std::size_t neg_rep = index_of(lo - 1);
        const std::size_t pos_rep = index_of(hi + 1);
        for (std::size_t i = 0; i < n; ++i)
            lv.classes.push_back(
                ClassSpec{vertex(i), true, vertex(i), i, Card::fin(1)});
        lv.classes.push_back(
            ClassSpec{component_id(pos_rep), false, "", pos_rep, Card::inf()});
        lv.classes.push_back(
            ClassSpec{component_id(neg_rep), false, "", neg_rep, Card::inf()});
        std::sort(lv.classes.begin(), lv.classes.end(),
                  [](const ClassSpec& a, const ClassSpec& b) {
                      return a.rep_index < b.rep_index;
                  });
        for (long long m = lo - 1; m <= hi; ++m) {
            const std::string from =
                m < lo ? component_id(neg_rep) : vertex(index_of(m));
            const std::string to =
                m + 1 > hi ? component_id(pos_rep) : vertex(index_of(m + 1));
            lv.bundles.push_back(BundleSpec{
                from, to, false, {arc_ref(index_of(m), index_of(m + 1))}});
        }
        return lv;
    }

    std::string custom_class_of(std::size_t n, std::size_t i) const override {
        if (i < n) return vertex(i);
        const long long v = value_of(i);
        if (n == 0) return v <= 0 ? component_id(0) : component_id(1);
        const long long hi = static_cast<long long>(n / 2);
        const long long lo = -static_cast<long long>((n - 1) / 2);
        return v < lo ? component_id(index_of(lo - 1))
                      : component_id(index_of(hi + 1));
    }

protected:
    std::size_t locality() const override { return 2; }
    bool all_singleton() const override { return true; }
    std::vector<Arc> arcs_at(std::size_t k) const override {
        if (k == 0) return {};
        if (k % 2 == 1) return {Arc{k == 1 ? 0 : k - 2, k}};
        return {Arc{k, k == 2 ? 0 : k - 2}};
    }

private:
    static long long value_of(std::size_t i) {
        if (i == 0) return 0;
        if (i % 2 == 1) return static_cast<long long>((i + 1) / 2);
        return -static_cast<long long>(i / 2);
    }

    static std::size_t index_of(long long v) {
        if (v == 0) return 0;
        if (v > 0) return static_cast<std::size_t>(2 * v - 1);
        return static_cast<std::size_t>(-2 * v);
    }
};

// z -> l1, z -> l2, ...
class OutStarSource final : public BuiltinSource {
public:
    std::string kind() const override { return "outstar"; }
    std::string vertex(std::size_t i) const override {
        return i == 0 ? "z" : "l" + std::to_string(i);
    }

protected:
    std::size_t locality() const override { return 1; }
    bool all_singleton() const override { return true; }
    std::vector<Arc> arcs_at(std::size_t k) const override {
        if (k == 0) return {};
        return {Arc{0, k}};
    }
    std::optional<Card> out_override(std::size_t i) const override {
        if (i == 0) return Card::inf();
        return std::nullopt;
    }
};

// Two symmetric rays a and b with one-way rungs a_t -> b_t; enumerated
// a0, b0, a1, b1, ...
class TwinRaysSource final : public BuiltinSource {
public:
    std::string kind() const override { return "twin-rays"; }
    std::string vertex(std::size_t i) const override {
        return (i % 2 == 0 ? "a" : "b") + std::to_string(i / 2);
    }

    std::vector<std::string> named_sets() const override { return {"A", "B"}; }

    bool in_named_set(const std::string& set, std::size_t i) const override {
        if (set == "A") return i % 2 == 0;
        if (set == "B") return i % 2 == 1;
        return Source::in_named_set(set, i);
    }

    TraceAnswer named_trace(const std::string& set, const VSet& x,
                            const ComponentInfo& comp) const override {
        if (set != "A" && set != "B") return Source::named_trace(set, x, comp);
        const std::size_t lane = set == "A" ? 0 : 1;
        if (comp.size.infinite)
            return TraceAnswer{comp.rep_index % 2 == lane ? Card::inf()
                                                          : Card::fin(0),
                               Certainty::Exact};
        return TraceAnswer{count_members(x, comp, lane), Certainty::Exact};
    }

protected:
    std::size_t locality() const override { return 2; }
    bool all_singleton() const override { return false; }
    std::vector<Arc> arcs_at(std::size_t k) const override {
        if (k == 0) return {};
        if (k == 1) return {Arc{0, 1}};
        if (k % 2 == 0) return {Arc{k - 2, k}, Arc{k, k - 2}};
        return {Arc{k - 2, k}, Arc{k, k - 2}, Arc{k - 1, k}};
    }
    bool infinite_bundle(const ClassRef& a, const ClassRef& b) const override {
        return !a.is_vertex && !b.is_vertex && a.infinite && b.infinite &&
               a.index % 2 == 0 && b.index % 2 == 1;
    }

private:
    Card count_members(const VSet& x, const ComponentInfo& comp,
                       std::size_t lane) const {
        const std::size_t maxx = x.empty() ? 0 : x.back() + 1;
        const MultiDigraph g =
            truncation(std::max(maxx, comp.rep_index + 1) + margin());
        const SubScc sub = detail::scc_minus(g, x);
        const int gi = sub.group_of[comp.rep_index];
        if (gi < 0 || sub.groups[static_cast<std::size_t>(gi)].rep != comp.rep_index)
            throw Error(Err::UnknownComponent,
                        "no component " + comp.id + " at this separator");
        std::uint64_t n = 0;
        for (int v : sub.groups[static_cast<std::size_t>(gi)].members)
            if (static_cast<std::size_t>(v) % 2 == lane) ++n;
        return Card::fin(n);
    }
};

// Symmetric ray u plus a dominating vertex w with w -> u_t for every t;
// enumerated w, u0, u1, ...
class DominatedRaySource final : public BuiltinSource {
public:
    std::string kind() const override { return "dominated-ray"; }
    std::string vertex(std::size_t i) const override {
        return i == 0 ? "w" : "u" + std::to_string(i - 1);
    }

    std::vector<std::string> named_sets() const override { return {"ray"}; }

    bool in_named_set(const std::string& set, std::size_t i) const override {
        if (set == "ray") return i >= 1;
        return Source::in_named_set(set, i);
    }

    TraceAnswer named_trace(const std::string& set, const VSet& x,
                            const ComponentInfo& comp) const override {
        if (set != "ray") return Source::named_trace(set, x, comp);
        if (comp.size.infinite) return TraceAnswer{Card::inf(), Certainty::Exact};
        // w is the only vertex outside the ray.
        std::uint64_t n = comp.size.value;
        if (comp.rep_index == 0 && n > 0) --n;
        (void)x;
        return TraceAnswer{Card::fin(n), Certainty::Exact};
    }

protected:
    std::size_t locality() const override { return 2; }
    bool all_singleton() const override { return false; }
    std::vector<Arc> arcs_at(std::size_t k) const override {
        if (k == 0) return {};
        if (k == 1) return {Arc{0, 1}};
        return {Arc{k - 1, k}, Arc{k, k - 1}, Arc{0, k}};
    }
    bool infinite_bundle(const ClassRef& a, const ClassRef& b) const override {
        return a.index == 0 && !b.is_vertex && b.infinite;
    }
    std::optional<Card> out_override(std::size_t i) const override {
        if (i == 0) return Card::inf();
        return std::nullopt;
    }
};

// Directed k-cycles c_t_0 .. c_t_{k-1} joined by two-way connectors between
// consecutive entry vertices c_t_0.
class NecklaceSource final : public BuiltinSource {
public:
    explicit NecklaceSource(std::size_t k) : k_(k) {}

    std::string kind() const override { return "necklace"; }
    std::string vertex(std::size_t i) const override {
        return "c" + std::to_string(i / k_) + "_" + std::to_string(i % k_);
    }

protected:
    std::size_t locality() const override { return k_; }
    bool all_singleton() const override { return false; }
    std::vector<Arc> arcs_at(std::size_t k) const override {
        const std::size_t t = k / k_, s = k % k_;
        std::vector<Arc> arcs;
        if (s >= 1) arcs.push_back(Arc{k - 1, k});
        if (s == k_ - 1 && k_ >= 2) arcs.push_back(Arc{k, t * k_});
        if (s == 0 && t >= 1) {
            arcs.push_back(Arc{(t - 1) * k_, k});
            arcs.push_back(Arc{k, (t - 1) * k_});
        }
        return arcs;
    }

private:
    std::size_t k_;
};

std::size_t parse_size_param(const std::string& name, const std::string& key,
                             const std::string& val, std::size_t lo,
                             std::size_t hi) {
    std::size_t out = 0;
    const char* first = val.data();
    const char* last = val.data() + val.size();
    auto [p, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || p != last || out < lo || out > hi)
        throw Error(Err::BadParams, name + ": parameter " + key + "=" + val +
                                        " out of range [" + std::to_string(lo) +
                                        "," + std::to_string(hi) + "]");
    return out;
}

} // namespace

SourcePtr make_builtin(const std::string& name,
                       const std::map<std::string, std::string>& params) {
    auto reject_params = [&] {
        if (!params.empty())
            throw Error(Err::BadParams, name + " takes no parameters");
    };
    if (name == "ray") {
        reject_params();
        return std::make_shared<RaySource>();
    }
    if (name == "reverse-ray") {
        reject_params();
        return std::make_shared<ReverseRaySource>();
    }
    if (name == "symmetric-ray") {
        reject_params();
        return std::make_shared<SymmetricRaySource>();
    }
    if (name == "zchain") {
        reject_params();
        return std::make_shared<ZChainSource>();
    }
    if (name == "outstar") {
        reject_params();
        return std::make_shared<OutStarSource>();
    }
    if (name == "twin-rays") {
        reject_params();
        return std::make_shared<TwinRaysSource>();
    }
    if (name == "dominated-ray") {
        reject_params();
        return std::make_shared<DominatedRaySource>();
    }
    if (name == "necklace") {
        std::size_t k = 3;
        for (const auto& [key, val] : params) {
            if (key != "k")
                throw Error(Err::BadParams, "necklace: unknown parameter " + key);
            k = parse_size_param(name, key, val, 1, 64);
        }
        return std::make_shared<NecklaceSource>(k);
    }
    throw Error(Err::UnknownBuiltin, "unknown builtin \"" + name + "\"");
}

} // namespace endspace
