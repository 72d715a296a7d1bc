#include "endspace/ends.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

namespace endspace {

namespace {

std::vector<std::string> prefix_ids(const Source& s, std::size_t n) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back(s.vertex(i));
    return ids;
}

} // namespace

ComponentTree component_tree(const Source& s, std::size_t n_max) {
    ComponentTree tree;
    const std::size_t top = s.clamp(n_max);
    std::vector<ComponentAnswer> answers;
    answers.reserve(top + 1);
    for (std::size_t n = 0; n <= top; ++n) {
        ComponentAnswer ans = s.components(prefix_vset(n), n + 1);
        if (ans.count.infinite)
            throw NonSolidError(SolidityReport{prefix_ids(s, n), ans.count,
                                               false, ans.certainty});
        tree.certainty = weakest(tree.certainty, ans.certainty);
        answers.push_back(std::move(ans));
    }
    tree.levels.resize(top + 1);
    for (std::size_t n = 0; n <= top; ++n)
        for (const ComponentInfo& c : answers[n].components)
            tree.levels[n].push_back(ComponentNode{c.id, c.rep_index, c.size, {}});
    // Parent of a level-n component: the level-(n-1) component containing
    // its representative.
    for (std::size_t n = 1; n <= top; ++n) {
        if (tree.levels[n].empty()) continue;
        std::size_t w = 0;
        for (const ComponentNode& c : tree.levels[n])
            w = std::max(w, c.rep_index + 1);
        const ComponentAnswer lab = s.components(prefix_vset(n - 1), w);
        for (ComponentNode& c : tree.levels[n]) {
            const auto pid = lab.label_of(s.vertex(c.rep_index));
            if (!pid)
                throw InternalError("no class label for " + s.vertex(c.rep_index));
            bool found = false;
            for (std::size_t k = 0; k < tree.levels[n - 1].size(); ++k)
                if (tree.levels[n - 1][k].id == *pid) {
                    c.parent = k;
                    found = true;
                    break;
                }
            if (!found)
                throw InternalError("component " + c.id +
                                    " has no parent at level " +
                                    std::to_string(n - 1));
        }
    }
    return tree;
}

namespace {

bool has_level_edge(const QuotientLevel& lv, const std::string& from,
                    const std::string& to) {
    const auto fi = lv.graph.find_vertex(from);
    const auto ti = lv.graph.find_vertex(to);
    if (!fi || !ti) return false;
    for (const Edge& e : lv.graph.edges())
        if (e.tail == *fi && e.head == *ti) return true;
    return false;
}

} // namespace

EndSpace end_space(const Source& s, std::size_t depth) {
    EndSpace es;
    es.depth = depth;
    es.tree = component_tree(s, depth);
    for (std::size_t n = 0; n <= depth; ++n) es.levels.push_back(level(s, n));
    es.certainty = es.tree.certainty;
    for (const QuotientLevel& lv : es.levels)
        es.certainty = weakest(es.certainty, lv.certainty);

    const std::size_t top = es.tree.levels.size() - 1;
    for (std::size_t c = 0; c < es.tree.levels[top].size(); ++c) {
        if (!es.tree.levels[top][c].size.infinite) continue;
        EndThread t;
        t.certainty = es.certainty;
        std::vector<std::string> rev;
        std::size_t lvl = top, idx = c;
        for (;;) {
            rev.push_back(es.tree.levels[lvl][idx].id);
            if (lvl == 0) break;
            idx = *es.tree.levels[lvl][idx].parent;
            --lvl;
        }
        t.classes.assign(rev.rbegin(), rev.rend());
        es.ends.push_back(std::move(t));
    }
    if (es.ends.empty()) return es;

    // An end pair carries a limit-edge thread iff the bundle between the
    // two components is nonempty at every level where they are separated.
    // Bundles shrink as the levels deepen, so a finite bundle at the top
    // level would die at some deeper level: the top bundle must be the
    // infinite kind.
    auto probe = [&](const std::vector<std::string>& ta,
                     const std::vector<std::string>& tb)
        -> std::optional<std::vector<EdgeLevelRef>> {
        std::vector<EdgeLevelRef> refs;
        for (std::size_t n = 0; n <= top; ++n) {
            const std::string& ca = ta[n];
            const std::string& cb = tb[n];
            if (ca == cb) {
                refs.push_back(EdgeLevelRef{false, ca, ca});
                continue;
            }
            if (!has_level_edge(es.levels[n], ca, cb)) return std::nullopt;
            refs.push_back(EdgeLevelRef{true, ca, cb});
        }
        return refs;
    };
    auto has_quotient_edge = [&](const QuotientLevel& lv, const std::string& a,
                                 const std::string& b) {
        const auto fi = lv.graph.find_vertex(a);
        const auto ti = lv.graph.find_vertex(b);
        if (!fi || !ti) return false;
        for (const Edge& e : lv.graph.edges())
            if (e.kind == EdgeKind::Quotient && e.tail == *fi && e.head == *ti)
                return true;
        return false;
    };

    for (std::size_t i = 0; i < es.ends.size(); ++i)
        for (std::size_t j = 0; j < es.ends.size(); ++j) {
            if (i == j) continue;
            auto refs = probe(es.ends[i].classes, es.ends[j].classes);
            if (!refs) continue;
            if (!has_quotient_edge(es.levels[top], es.ends[i].classes[top],
                                   es.ends[j].classes[top]))
                continue;
            LimitEdgeThread t;
            t.tail_end = i;
            t.head_end = j;
            t.levels = std::move(*refs);
            t.certainty = es.certainty;
            es.limit_edges.push_back(std::move(t));
        }

    // A limit edge at a vertex needs an edge from (to) the vertex itself
    // into the end's component at every separating level.  A vertex of
    // finite degree cannot supply these forever: each of its finitely many
    // neighbours lands in the chain eventually.  So only vertices of
    // infinite out- (in-) degree qualify.
    const std::size_t window = s.clamp(top + 24);
    std::vector<std::vector<std::string>> labels(top + 1);
    for (std::size_t n = 0; n <= top; ++n)
        labels[n] = level_classes_of(s, n, window);
    const MultiDigraph g = s.truncation(window);
    auto vertex_bundle_nonempty = [&](std::size_t v, const std::string& cls,
                                      std::size_t n, bool outgoing) {
        const std::vector<int>& inc = outgoing
                                          ? g.out_edges(static_cast<int>(v))
                                          : g.in_edges(static_cast<int>(v));
        for (int ei : inc) {
            const Edge& e = g.edge(ei);
            const int other = outgoing ? e.head : e.tail;
            if (labels[n][static_cast<std::size_t>(other)] == cls) return true;
        }
        return false;
    };
    auto vprobe = [&](std::size_t v, std::size_t j, bool outgoing)
        -> std::optional<std::vector<EdgeLevelRef>> {
        const std::string vid = s.vertex(v);
        std::vector<EdgeLevelRef> refs;
        for (std::size_t n = 0; n <= top; ++n) {
            const std::string& ce = es.ends[j].classes[n];
            if (labels[n][v] == ce) {
                refs.push_back(EdgeLevelRef{false, ce, ce});
                continue;
            }
            if (!vertex_bundle_nonempty(v, ce, n, outgoing))
                return std::nullopt;
            if (outgoing)
                refs.push_back(EdgeLevelRef{true, vid, ce});
            else
                refs.push_back(EdgeLevelRef{true, ce, vid});
        }
        return refs;
    };

    for (std::size_t v = 0; v < top && v < window; ++v) {
        const DegreeAnswer deg = s.degrees(v);
        for (std::size_t j = 0; j < es.ends.size(); ++j) {
            if (deg.out.infinite) {
                if (auto refs = vprobe(v, j, true)) {
                    LimitEdgeThread t;
                    t.tail_is_vertex = true;
                    t.tail_vertex = s.vertex(v);
                    t.head_end = j;
                    t.levels = std::move(*refs);
                    t.certainty = weakest(es.certainty, deg.certainty);
                    es.limit_edges.push_back(std::move(t));
                }
            }
            if (deg.in.infinite) {
                if (auto refs = vprobe(v, j, false)) {
                    LimitEdgeThread t;
                    t.tail_end = j;
                    t.head_is_vertex = true;
                    t.head_vertex = s.vertex(v);
                    t.levels = std::move(*refs);
                    t.certainty = weakest(es.certainty, deg.certainty);
                    es.limit_edges.push_back(std::move(t));
                }
            }
        }
    }
    return es;
}

BasicOpen basic_open(const EndSpace& es, std::size_t end_index, std::size_t n) {
    if (end_index >= es.ends.size())
        throw Error(Err::BadParams,
                    "no end thread with index " + std::to_string(end_index));
    const EndThread& t = es.ends[end_index];
    if (n >= t.classes.size())
        throw Error(Err::DepthExceeded,
                    "thread reaches level " +
                        std::to_string(t.classes.size() - 1) + ", asked for " +
                        std::to_string(n));
    BasicOpen open;
    open.level = n;
    open.class_id = t.classes[n];
    open.certainty = es.certainty;
    for (std::size_t k = 0; k < es.ends.size(); ++k)
        if (es.ends[k].classes[n] == open.class_id)
            open.ends_inside.push_back(k);
    for (std::size_t l = 0; l < es.limit_edges.size(); ++l) {
        const EdgeLevelRef& ref = es.limit_edges[l].levels[n];
        if (!ref.separated && ref.from == open.class_id)
            open.limit_edges_inside.push_back(l);
    }
    const QuotientLevel& lv = es.levels[n];
    const auto ci = lv.graph.find_vertex(open.class_id);
    if (!ci)
        throw InternalError("class " + open.class_id + " missing at level " +
                            std::to_string(n));
    for (const Edge& e : lv.graph.edges())
        if (e.tail == *ci || e.head == *ci) open.boundary_edges.push_back(e.id);
    return open;
}

namespace {

struct SearchGraph {
    std::vector<std::vector<int>> out, in;
    std::vector<std::string> ids;
    std::map<std::string, int> index;

    bool has_edge(int a, int b) const {
        return std::binary_search(out[static_cast<std::size_t>(a)].begin(),
                                  out[static_cast<std::size_t>(a)].end(), b);
    }
};

SearchGraph search_graph(const MultiDigraph& g) {
    SearchGraph sg;
    const int n = g.vertex_count();
    sg.out.resize(static_cast<std::size_t>(n));
    sg.in.resize(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        sg.ids.push_back(g.vertex_id(v));
        sg.index[g.vertex_id(v)] = v;
    }
    for (const Edge& e : g.edges()) {
        sg.out[static_cast<std::size_t>(e.tail)].push_back(e.head);
        sg.in[static_cast<std::size_t>(e.head)].push_back(e.tail);
    }
    for (auto& a : sg.out) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    for (auto& a : sg.in) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    return sg;
}

std::vector<int> mutual_component(const SearchGraph& sg, int v,
                                  const std::vector<char>& allowed) {
    const int n = static_cast<int>(sg.ids.size());
    std::vector<char> fwd(static_cast<std::size_t>(n), 0);
    std::vector<char> bwd(static_cast<std::size_t>(n), 0);
    std::deque<int> q{v};
    fwd[static_cast<std::size_t>(v)] = 1;
    while (!q.empty()) {
        const int u = q.front();
        q.pop_front();
        for (int w : sg.out[static_cast<std::size_t>(u)])
            if (allowed[static_cast<std::size_t>(w)] &&
                !fwd[static_cast<std::size_t>(w)]) {
                fwd[static_cast<std::size_t>(w)] = 1;
                q.push_back(w);
            }
    }
    q = {v};
    bwd[static_cast<std::size_t>(v)] = 1;
    while (!q.empty()) {
        const int u = q.front();
        q.pop_front();
        for (int w : sg.in[static_cast<std::size_t>(u)])
            if (allowed[static_cast<std::size_t>(w)] &&
                !bwd[static_cast<std::size_t>(w)]) {
                bwd[static_cast<std::size_t>(w)] = 1;
                q.push_back(w);
            }
    }
    std::vector<int> comp;
    for (int u = 0; u < n; ++u)
        if (fwd[static_cast<std::size_t>(u)] && bwd[static_cast<std::size_t>(u)])
            comp.push_back(u);
    return comp;
}

// Smallest self-contained patch around v: its mutual reachability class
// after deleting the first single vertex that pins the class away from the
// truncation frontier.  Beads cut off by the window edge are artifacts, not
// strong components, and are rejected.
std::optional<std::vector<int>> bead_of(const SearchGraph& sg, int v,
                                        const std::vector<char>& unused,
                                        int frontier) {
    std::vector<char> allowed = unused;
    auto attempt = [&]() -> std::optional<std::vector<int>> {
        std::vector<int> comp = mutual_component(sg, v, allowed);
        for (int u : comp)
            if (u >= frontier) return std::nullopt;
        return comp;
    };
    if (auto c = attempt()) return c;
    const int n = static_cast<int>(sg.ids.size());
    for (int w = 0; w < n; ++w) {
        if (!unused[static_cast<std::size_t>(w)] || w == v) continue;
        allowed[static_cast<std::size_t>(w)] = 0;
        if (auto c = attempt()) return c;
        allowed[static_cast<std::size_t>(w)] = 1;
    }
    return std::nullopt;
}

// Lex-least shortest path from any source to any target whose interior
// vertices are drawn from `interior` only.
std::optional<std::vector<int>> lex_shortest(const SearchGraph& sg,
                                             const std::vector<int>& sources,
                                             const std::vector<int>& targets,
                                             const std::vector<char>& interior) {
    const int n = static_cast<int>(sg.ids.size());
    std::vector<char> node_ok(interior.begin(), interior.end());
    std::vector<char> is_target(static_cast<std::size_t>(n), 0);
    std::vector<int> dist(static_cast<std::size_t>(n), -1);
    std::deque<int> q;
    for (int t : targets) {
        node_ok[static_cast<std::size_t>(t)] = 1;
        is_target[static_cast<std::size_t>(t)] = 1;
        dist[static_cast<std::size_t>(t)] = 0;
        q.push_back(t);
    }
    while (!q.empty()) {
        const int u = q.front();
        q.pop_front();
        for (int w : sg.in[static_cast<std::size_t>(u)])
            if (node_ok[static_cast<std::size_t>(w)] &&
                !is_target[static_cast<std::size_t>(w)] &&
                dist[static_cast<std::size_t>(w)] < 0) {
                dist[static_cast<std::size_t>(w)] =
                    dist[static_cast<std::size_t>(u)] + 1;
                q.push_back(w);
            }
    }
    int best_src = -1, best_hop = -1, best_d = -1;
    for (int s : sources)
        for (int w : sg.out[static_cast<std::size_t>(s)]) {
            if (!node_ok[static_cast<std::size_t>(w)] ||
                dist[static_cast<std::size_t>(w)] < 0)
                continue;
            const int d = dist[static_cast<std::size_t>(w)] + 1;
            if (best_d < 0 || d < best_d) {
                best_d = d;
                best_src = s;
                best_hop = w;
            }
        }
    if (best_d < 0) return std::nullopt;
    std::vector<int> path{best_src, best_hop};
    int cur = best_hop;
    while (dist[static_cast<std::size_t>(cur)] != 0) {
        int nxt = -1;
        for (int w : sg.out[static_cast<std::size_t>(cur)])
            if (node_ok[static_cast<std::size_t>(w)] &&
                dist[static_cast<std::size_t>(w)] ==
                    dist[static_cast<std::size_t>(cur)] - 1 &&
                (nxt < 0 || w < nxt))
                nxt = w;
        if (nxt < 0) throw InternalError("path reconstruction failed");
        path.push_back(nxt);
        cur = nxt;
    }
    return path;
}

} // namespace

std::optional<NecklacePrefix> necklace_search(const Source& s,
                                              const std::vector<USet>& us_in,
                                              std::size_t beads,
                                              std::size_t depth) {
    const std::vector<USet> us =
        us_in.empty() ? std::vector<USet>{USet::all()} : us_in;
    const std::size_t t = s.clamp(depth);
    const MultiDigraph g = s.truncation(t);
    const SearchGraph sg = search_graph(g);
    const int n = g.vertex_count();
    const bool whole = s.vertex_count() && *s.vertex_count() <= t;
    const int frontier = whole ? n : std::max(0, n - 8);

    std::vector<std::vector<char>> member(
        us.size(), std::vector<char>(static_cast<std::size_t>(n), 0));
    for (std::size_t u = 0; u < us.size(); ++u)
        for (int v = 0; v < n; ++v)
            member[u][static_cast<std::size_t>(v)] =
                uset_contains(s, us[u], static_cast<std::size_t>(v)) ? 1 : 0;

    std::vector<char> unused(static_cast<std::size_t>(n), 1);
    std::vector<std::vector<int>> picked, fwd, bwd;

    std::function<bool(std::size_t)> grow = [&](std::size_t k) -> bool {
        if (k == beads) return true;
        for (int v = 0; v < n; ++v) {
            if (!unused[static_cast<std::size_t>(v)]) continue;
            auto bead = bead_of(sg, v, unused, frontier);
            if (!bead) continue;
            bool hits_all = true;
            for (std::size_t u = 0; u < us.size() && hits_all; ++u) {
                bool hit = false;
                for (int b : *bead) hit = hit || member[u][static_cast<std::size_t>(b)];
                hits_all = hit;
            }
            if (!hits_all) continue;
            std::optional<std::vector<int>> f, b;
            if (k > 0) {
                std::vector<char> interior = unused;
                for (int bv : *bead) interior[static_cast<std::size_t>(bv)] = 0;
                f = lex_shortest(sg, picked.back(), *bead, interior);
                if (!f) continue;
                b = lex_shortest(sg, *bead, picked.back(), interior);
                if (!b) continue;
            }
            std::vector<int> consumed = *bead;
            if (f)
                for (std::size_t i = 1; i + 1 < f->size(); ++i)
                    consumed.push_back((*f)[i]);
            if (b)
                for (std::size_t i = 1; i + 1 < b->size(); ++i)
                    consumed.push_back((*b)[i]);
            for (int cv : consumed) unused[static_cast<std::size_t>(cv)] = 0;
            picked.push_back(*bead);
            if (f) fwd.push_back(*f);
            if (b) bwd.push_back(*b);
            if (grow(k + 1)) return true;
            picked.pop_back();
            if (f) fwd.pop_back();
            if (b) bwd.pop_back();
            for (int cv : consumed) unused[static_cast<std::size_t>(cv)] = 1;
        }
        return false;
    };
    if (!grow(0)) return std::nullopt;

    NecklacePrefix p;
    p.depth = t;
    p.sets = us;
    auto name = [&](const std::vector<int>& vs) {
        std::vector<std::string> out;
        for (int v : vs) out.push_back(sg.ids[static_cast<std::size_t>(v)]);
        return out;
    };
    for (const auto& bead : picked) p.beads.push_back(name(bead));
    for (const auto& path : fwd) p.forward.push_back(name(path));
    for (const auto& path : bwd) p.backward.push_back(name(path));
    p.attachment.assign(us.size(), std::vector<bool>(picked.size(), false));
    for (std::size_t u = 0; u < us.size(); ++u)
        for (std::size_t k = 0; k < picked.size(); ++k)
            for (int b : picked[k])
                if (member[u][static_cast<std::size_t>(b)])
                    p.attachment[u][k] = true;
    return p;
}

NecklaceVerdict verify_necklace(const Source& s, const NecklacePrefix& p,
                                std::size_t depth) {
    const std::size_t t = s.clamp(depth);
    const MultiDigraph g = s.truncation(t);
    const SearchGraph sg = search_graph(g);
    auto fail = [](std::string v) { return NecklaceVerdict{false, std::move(v)}; };

    const std::size_t nb = p.beads.size();
    std::vector<std::vector<int>> beads;
    std::vector<int> owner(sg.ids.size(), -1);
    for (std::size_t i = 0; i < nb; ++i) {
        if (p.beads[i].empty())
            return fail("bead " + std::to_string(i) + " is empty");
        std::vector<int> b;
        for (const std::string& id : p.beads[i]) {
            const auto it = sg.index.find(id);
            if (it == sg.index.end())
                return fail("unknown vertex " + id + " in bead " +
                            std::to_string(i));
            if (owner[static_cast<std::size_t>(it->second)] >= 0)
                return fail(
                    "disjointness violated between beads " +
                    std::to_string(owner[static_cast<std::size_t>(it->second)]) +
                    " and " + std::to_string(i));
            owner[static_cast<std::size_t>(it->second)] = static_cast<int>(i);
            b.push_back(it->second);
        }
        std::vector<char> allow(sg.ids.size(), 0);
        for (int v : b) allow[static_cast<std::size_t>(v)] = 1;
        if (mutual_component(sg, b[0], allow).size() != b.size())
            return fail("bead " + std::to_string(i) + " not strongly connected");
        beads.push_back(std::move(b));
    }

    if (nb > 0 && p.forward.size() != nb - 1)
        return fail("missing forward path");
    if (nb > 0 && p.backward.size() != nb - 1)
        return fail("missing backward path");
    auto check_path = [&](const std::vector<std::string>& path, int from_bead,
                          int to_bead, const std::string& label)
        -> std::optional<NecklaceVerdict> {
        if (path.size() < 2) return fail(label + " too short");
        std::vector<int> vs;
        for (const std::string& id : path) {
            const auto it = sg.index.find(id);
            if (it == sg.index.end())
                return fail("unknown vertex " + id + " on " + label);
            vs.push_back(it->second);
        }
        if (owner[static_cast<std::size_t>(vs.front())] != from_bead ||
            owner[static_cast<std::size_t>(vs.back())] != to_bead)
            return fail(label + " endpoints not in the right beads");
        for (std::size_t i = 1; i + 1 < vs.size(); ++i)
            if (owner[static_cast<std::size_t>(vs[i])] >= 0)
                return fail(label + " not internally disjoint from beads");
        for (std::size_t i = 0; i + 1 < vs.size(); ++i)
            if (!sg.has_edge(vs[i], vs[i + 1]))
                return fail(label + " broken at " + path[i]);
        return std::nullopt;
    };
    for (std::size_t k = 0; k + 1 < nb; ++k) {
        if (auto bad = check_path(p.forward[k], static_cast<int>(k),
                                  static_cast<int>(k + 1),
                                  "forward path " + std::to_string(k)))
            return *bad;
        if (auto bad = check_path(p.backward[k], static_cast<int>(k + 1),
                                  static_cast<int>(k),
                                  "backward path " + std::to_string(k)))
            return *bad;
    }

    if (p.attachment.size() != p.sets.size())
        return fail("attachment record has wrong shape");
    for (std::size_t u = 0; u < p.sets.size(); ++u) {
        if (p.attachment[u].size() != nb)
            return fail("attachment record has wrong shape");
        for (std::size_t k = 0; k < nb; ++k) {
            bool hit = false;
            for (int v : beads[k])
                hit = hit ||
                      uset_contains(s, p.sets[u], static_cast<std::size_t>(v));
            if (hit != p.attachment[u][k])
                return fail("attachment record wrong for set " +
                            p.sets[u].display() + " at bead " +
                            std::to_string(k));
        }
    }
    return NecklaceVerdict{};
}

namespace {

struct RankCtx {
    const Source& s;
    const std::vector<USet>& us;
    std::size_t sep_bound;
    std::size_t bound;
    Certainty certainty = Certainty::Exact;
    // The search revisits the same separator along many branches; every
    // answer below depends only on its key, so repeats are looked up.
    std::map<std::pair<VSet, std::size_t>, ComponentAnswer> comp_cache{};
    std::map<std::pair<VSet, std::size_t>, std::optional<std::string>>
        trace_cache{};
    std::map<std::tuple<VSet, std::size_t, std::size_t>,
             std::optional<std::vector<std::string>>>
        cert_cache{};
};

const ComponentAnswer& components_cached(RankCtx& ctx, const VSet& x,
                                         std::size_t w) {
    auto key = std::make_pair(x, w);
    auto it = ctx.comp_cache.find(key);
    if (it == ctx.comp_cache.end())
        it = ctx.comp_cache.emplace(std::move(key), ctx.s.components(x, w))
                 .first;
    return it->second;
}

std::string x_display(const Source& s, const VSet& x) {
    std::string out = "{";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) out += ',';
        out += s.vertex(x[i]);
    }
    return out + "}";
}

// Nonempty subsets of [0, bound) \ base with at most sep_bound elements,
// ordered by (size, lex).
std::vector<VSet> separator_candidates(const RankCtx& ctx, const VSet& base) {
    std::vector<std::size_t> avail;
    for (std::size_t i = 0; i < ctx.bound; ++i)
        if (!std::binary_search(base.begin(), base.end(), i))
            avail.push_back(i);
    std::vector<VSet> out;
    for (std::size_t size = 1; size <= ctx.sep_bound && size <= avail.size();
         ++size) {
        std::vector<std::size_t> idx(size);
        std::iota(idx.begin(), idx.end(), 0);
        for (;;) {
            VSet x;
            for (std::size_t i : idx) x.push_back(avail[i]);
            out.push_back(std::move(x));
            std::size_t i = size;
            bool done = true;
            while (i-- > 0) {
                if (idx[i] != i + avail.size() - size) {
                    ++idx[i];
                    for (std::size_t j = i + 1; j < size; ++j)
                        idx[j] = idx[j - 1] + 1;
                    done = false;
                    break;
                }
            }
            if (done) break;
        }
    }
    return out;
}

bool trace_finite_on(RankCtx& ctx, const VSet& x, const ComponentInfo& comp,
                     std::string* which) {
    auto key = std::make_pair(x, comp.rep_index);
    auto it = ctx.trace_cache.find(key);
    if (it == ctx.trace_cache.end()) {
        std::optional<std::string> fin;
        for (const USet& u : ctx.us) {
            const TraceAnswer tr = uset_trace(ctx.s, u, x, comp);
            ctx.certainty = weakest(ctx.certainty, tr.certainty);
            if (!tr.card.infinite) {
                fin = u.display();
                break;
            }
        }
        it = ctx.trace_cache.emplace(std::move(key), std::move(fin)).first;
    }
    if (!it->second) return false;
    if (which) *which = *it->second;
    return true;
}

bool inside_region(RankCtx& ctx, const VSet& x_region,
                   const std::string& region_id, const ComponentInfo& comp) {
    const ComponentAnswer& ans =
        components_cached(ctx, x_region, comp.rep_index + 1);
    const auto lab = ans.label_of(ctx.s.vertex(comp.rep_index));
    return lab && *lab == region_id;
}

std::optional<std::vector<std::string>> certify(RankCtx& ctx,
                                                const VSet& x_region,
                                                const ComponentInfo* region,
                                                std::size_t r);

// Certifies rank(region) <= r where the region is a strong component
// reported at x_region, or the whole digraph when region is null.
std::optional<std::vector<std::string>> certify_impl(RankCtx& ctx,
                                                     const VSet& x_region,
                                                     const ComponentInfo* region,
                                                     std::size_t r) {
    if (region) {
        std::string which;
        if (trace_finite_on(ctx, x_region, *region, &which))
            return std::vector<std::string>{
                region->id + " at X=" + x_display(ctx.s, x_region) +
                ": trace of " + which + " is finite"};
    }
    if (r == 0) return std::nullopt;

    auto attempt =
        [&](const VSet& x) -> std::optional<std::vector<std::string>> {
        const std::size_t w = x.empty() ? 1 : x.back() + 2;
        const ComponentAnswer& ans = components_cached(ctx, x, w);
        ctx.certainty = weakest(ctx.certainty, ans.certainty);
        std::vector<std::string> lines;
        lines.push_back((region ? region->id : std::string("D")) +
                        ": X=" + x_display(ctx.s, x));
        if (ans.count.infinite) {
            // Components cannot be listed; only the blanket certificate
            // that all of them are finite applies.
            if (!ans.all_finite) return std::nullopt;
            lines.push_back("  all components finite");
            return lines;
        }
        for (const ComponentInfo& c : ans.components) {
            if (region && !inside_region(ctx, x_region, region->id, c))
                continue;
            if (!c.size.infinite) continue;
            std::string which;
            if (trace_finite_on(ctx, x, c, &which)) {
                lines.push_back("  " + c.id + ": trace of " + which +
                                " is finite");
                continue;
            }
            auto sub = certify(ctx, x, &c, r - 1);
            if (!sub) return std::nullopt;
            for (const std::string& l : *sub) lines.push_back("  " + l);
        }
        return lines;
    };

    for (const VSet& xs : separator_candidates(ctx, x_region)) {
        VSet x = x_region;
        x.insert(x.end(), xs.begin(), xs.end());
        if (auto lines = attempt(normalize_vset(std::move(x)))) return lines;
    }
    // The empty separator asks about the digraph's own components; it can
    // only certify the whole-digraph region and is tried last.
    if (!region)
        if (auto lines = attempt({})) return lines;
    return std::nullopt;
}

std::optional<std::vector<std::string>> certify(RankCtx& ctx,
                                                const VSet& x_region,
                                                const ComponentInfo* region,
                                                std::size_t r) {
    const std::tuple<VSet, std::size_t, std::size_t> key{
        x_region, region ? region->rep_index : static_cast<std::size_t>(-1),
        r};
    auto it = ctx.cert_cache.find(key);
    if (it == ctx.cert_cache.end())
        it = ctx.cert_cache.emplace(key, certify_impl(ctx, x_region, region, r))
                 .first;
    return it->second;
}

} // namespace

RankResult rank_search(const Source& s, const std::vector<USet>& us_in,
                       std::size_t r_max, std::size_t sep_bound,
                       std::size_t depth) {
    const std::vector<USet> us =
        us_in.empty() ? std::vector<USet>{USet::all()} : us_in;
    RankCtx ctx{s, us, sep_bound, s.clamp(depth)};
    RankResult res;
    res.r_max = r_max;
    for (const USet& u : us) {
        bool fin = false;
        switch (u.kind) {
        case USet::Kind::All: fin = s.vertex_count().has_value(); break;
        case USet::Kind::Named: fin = false; break; // named sets are infinite
        case USet::Kind::Explicit: fin = true; break;
        }
        if (fin) {
            res.has_rank = true;
            res.rank = 0;
            res.finite_u = u.display();
            res.witnesses = {"trace of " + u.display() + " is finite"};
            res.certainty = ctx.certainty;
            return res;
        }
    }
    for (std::size_t r = 1; r <= r_max; ++r)
        if (auto lines = certify(ctx, {}, nullptr, r)) {
            res.has_rank = true;
            res.rank = r;
            res.witnesses = std::move(*lines);
            res.certainty = ctx.certainty;
            return res;
        }
    res.certainty = ctx.certainty;
    return res;
}

} // namespace endspace
