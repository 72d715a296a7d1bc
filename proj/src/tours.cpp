#include "endspace/tours.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "endspace/core.hpp"

namespace endspace {

namespace {

std::vector<std::string> side_ids(const MultiDigraph& g,
                                  const std::vector<int>& side) {
    std::vector<std::string> out;
    out.reserve(side.size());
    for (int v : side) out.push_back(g.vertex_id(v));
    return out;
}

void fill_cut_witness(EulerVerdict& v, const MultiDigraph& g, const Cut& c) {
    v.ok = false;
    v.side1 = side_ids(g, c.side1);
    v.side2 = side_ids(g, c.side2);
    v.forward = c.forward;
    v.backward = c.backward;
}

// Unbalanced cut induced by a down-closed set of the condensation order,
// if any.  Cuts crossed by a quotient edge stand for infinite cuts of the
// underlying digraph and are exempt.
std::optional<Cut> down_closed_unbalanced(const MultiDigraph& g) {
    const SccResult scc = strong_components(g);
    const std::size_t k = static_cast<std::size_t>(scc.count());
    if (k < 2) return std::nullopt;
    std::vector<std::pair<int, int>> dag;
    for (const Edge& e : g.edges()) {
        const int a = scc.component_of[e.tail];
        const int b = scc.component_of[e.head];
        if (a != b) dag.emplace_back(a, b);
    }
    auto test = [&](const std::vector<char>& in) -> std::optional<Cut> {
        for (const auto& [a, b] : dag)
            if (in[b] && !in[a]) return std::nullopt; // not down-closed
        for (const Edge& e : g.edges())
            if (e.kind == EdgeKind::Quotient &&
                in[scc.component_of[e.tail]] != in[scc.component_of[e.head]])
                return std::nullopt; // infinite cut, exempt
        std::vector<int> side1;
        for (std::size_t c = 0; c < k; ++c)
            if (in[c])
                side1.insert(side1.end(), scc.members[c].begin(),
                             scc.members[c].end());
        std::sort(side1.begin(), side1.end());
        Cut cut = cut_sizes(g, side1);
        if (!cut.balanced()) return cut;
        return std::nullopt;
    };
    if (k <= 16) {
        for (std::uint32_t mask = 1; mask + 1 < (1u << k); ++mask) {
            std::vector<char> in(k, 0);
            for (std::size_t c = 0; c < k; ++c) in[c] = (mask >> c) & 1u;
            if (auto cut = test(in)) return cut;
        }
    } else {
        // Too many components to enumerate every ideal; prefixes of the
        // topological order are always down-closed and expose the linear
        // obstructions that arise here.
        for (std::size_t j = 0; j + 1 < k; ++j) {
            std::vector<char> in(k, 0);
            for (std::size_t c = 0; c <= j; ++c) in[c] = 1;
            if (auto cut = test(in)) return cut;
        }
    }
    return std::nullopt;
}

} // namespace

EulerVerdict check_euler(const Source& s, std::size_t n_max) {
    EulerVerdict v;
    const std::size_t t = s.clamp(n_max);
    for (std::size_t i = 0; i < t; ++i) {
        const DegreeAnswer d = s.degrees(i);
        v.certainty = weakest(v.certainty, d.certainty);
        if (d.in.infinite || d.out.infinite) {
            v.ok = false;
            v.infinite_degree = true;
            v.vertex = s.vertex(i);
            return v;
        }
    }
    for (std::size_t n = 0; n <= n_max; ++n) {
        const QuotientLevel lv = level(s, n);
        if (lv.index < n) break; // levels saturated, nothing new deeper
        v.certainty = weakest(v.certainty, lv.certainty);
        if (auto cut = down_closed_unbalanced(lv.graph)) {
            fill_cut_witness(v, lv.graph, *cut);
            return v;
        }
    }
    const MultiDigraph g = s.truncation(t);
    if (g.vertex_count() >= 2)
        for (int i = 0; i < g.vertex_count(); ++i) {
            const Cut cut = cut_sizes(g, {i});
            if (!cut.balanced()) {
                fill_cut_witness(v, g, cut);
                return v;
            }
        }
    const auto total = s.vertex_count();
    if (total && *total <= 12 && g.vertex_count() == static_cast<int>(*total) &&
        g.vertex_count() >= 2) {
        const int nv = g.vertex_count();
        for (std::uint32_t mask = 1; mask + 1 < (1u << nv); ++mask) {
            std::vector<int> side1;
            for (int i = 0; i < nv; ++i)
                if ((mask >> i) & 1u) side1.push_back(i);
            const Cut cut = cut_sizes(g, side1);
            if (!cut.balanced()) {
                fill_cut_witness(v, g, cut);
                return v;
            }
        }
    }
    return v;
}

Walk project_walk(const QuotientLevel& from, const QuotientLevel& to,
                  const BondingMap& b, const Walk& w) {
    if (b.from_level != from.index || b.to_level != to.index)
        throw Error(Err::LevelMismatch,
                    "bonding map is " + std::to_string(b.from_level) + "->" +
                        std::to_string(b.to_level) + ", levels are " +
                        std::to_string(from.index) + ", " +
                        std::to_string(to.index));
    const WalkVerdict fit = is_valid_walk(from.graph, w, WalkRequirements{});
    if (!fit.ok)
        throw Error(Err::LevelMismatch, "walk does not fit level " +
                                            std::to_string(from.index) + ": " +
                                            fit.violation);
    auto map_vertex = [&](int idx) {
        const std::string& id = b.vertex_map.at(static_cast<std::size_t>(idx));
        const auto mapped = to.graph.find_vertex(id);
        if (!mapped)
            throw InternalError("image class " + id + " missing at level " +
                                std::to_string(to.index));
        return *mapped;
    };
    Walk out;
    out.vertices.push_back(map_vertex(w.vertices.front()));
    for (std::size_t i = 0; i < w.edges.size(); ++i) {
        const EdgeImage& img = b.edge_map.at(static_cast<std::size_t>(w.edges[i]));
        const int head = map_vertex(w.vertices[i + 1]);
        if (img.collapsed) {
            if (head != out.vertices.back())
                throw InternalError("collapsed edge " +
                                    from.graph.edge(w.edges[i]).id +
                                    " changes class under projection");
            continue;
        }
        const auto ei = to.graph.find_edge(img.id);
        if (!ei)
            throw InternalError("image edge " + img.id + " missing at level " +
                                std::to_string(to.index));
        out.edges.push_back(*ei);
        out.vertices.push_back(head);
    }
    return out;
}

TourThread lift_euler(const Source& s, std::size_t n_max,
                      const std::string& anchor, std::uint64_t tour_limit) {
    const EulerVerdict ev = check_euler(s, n_max);
    if (!ev.ok) {
        const std::string what =
            ev.infinite_degree
                ? "infinite degree at " + ev.vertex
                : "unbalanced cut (" + std::to_string(ev.forward) + ", " +
                      std::to_string(ev.backward) + ")";
        throw Error(Err::EulerConditionFailed, what);
    }

    std::vector<QuotientLevel> levels;
    for (std::size_t n = 0; n <= n_max; ++n) {
        QuotientLevel lv = level(s, n);
        if (lv.index < n) break; // saturated
        levels.push_back(std::move(lv));
    }
    const std::size_t top = levels.size() - 1;
    std::vector<BondingMap> bonds(levels.size());
    for (std::size_t n = 1; n <= top; ++n) bonds[n] = bonding(s, n, n - 1);

    const auto a0 = levels[0].graph.find_vertex(anchor);
    if (!a0)
        throw Error(Err::UnknownComponent,
                    "no class " + anchor + " at level 0");

    TourThread t;
    t.anchor = anchor;
    for (const QuotientLevel& lv : levels)
        t.certainty = weakest(t.certainty, lv.certainty);

    bool overflow = false;
    auto candidates = [&](std::size_t n, const Walk* prev) {
        std::vector<Walk> out;
        const MultiDigraph& g = levels[n].graph;
        if (n == 0) {
            TourList tl = enumerate_euler_tours(g, *a0, tour_limit);
            overflow = overflow || tl.overflow;
            return tl.tours;
        }
        const std::string prev_anchor =
            levels[n - 1].graph.vertex_id(prev->vertices.front());
        for (int c = 0; c < g.vertex_count(); ++c) {
            if (bonds[n].vertex_map[static_cast<std::size_t>(c)] != prev_anchor)
                continue;
            TourList tl = enumerate_euler_tours(g, c, tour_limit);
            overflow = overflow || tl.overflow;
            for (Walk& w : tl.tours)
                if (project_walk(levels[n], levels[n - 1], bonds[n], w) == *prev)
                    out.push_back(std::move(w));
        }
        return out;
    };

    std::vector<Walk> chosen, best;
    bool done = false;
    auto dfs = [&](auto&& self, std::size_t n) -> void {
        std::vector<Walk> cands =
            candidates(n, n == 0 ? nullptr : &chosen.back());
        for (Walk& w : cands) {
            chosen.push_back(std::move(w));
            if (chosen.size() > best.size()) best = chosen;
            if (n == top) {
                done = true;
                return;
            }
            self(self, n + 1);
            if (done) return;
            chosen.pop_back();
        }
    };
    dfs(dfs, 0);
    t.walks = done ? std::move(chosen) : std::move(best);
    t.complete = done;
    if (!done && overflow) t.certainty = Certainty::Provisional;
    return t;
}

namespace {

// Representative source vertex of a level class: singletons are source
// vertices already, components are named by their representative's index.
std::string class_witness(const Source& s, const std::string& class_id) {
    if (auto rep = parse_component_id(class_id)) return s.vertex(*rep);
    return class_id;
}

} // namespace

WalkThread span_walk(const Source& s, std::size_t n_max) {
    std::vector<QuotientLevel> levels; // levels[i] is level i+1
    for (std::size_t n = 1; n <= n_max; ++n) {
        QuotientLevel lv = level(s, n);
        if (lv.index < n) break; // saturated
        if (auto bad = first_unreachable_pair(lv.graph))
            throw NotStronglyConnectedError(
                class_witness(s, lv.graph.vertex_id(bad->first)),
                class_witness(s, lv.graph.vertex_id(bad->second)), n);
        levels.push_back(std::move(lv));
    }
    if (levels.empty())
        throw Error(Err::BadParams, "span_walk needs depth at least 1");

    WalkThread t;
    for (const QuotientLevel& lv : levels)
        t.certainty = weakest(t.certainty, lv.certainty);
    t.walks.push_back(closed_spanning_walk(levels[0].graph, 0));

    for (std::size_t n = 2; n <= levels.size(); ++n) {
        const QuotientLevel& fine = levels[n - 1];
        const QuotientLevel& coarse = levels[n - 2];
        const MultiDigraph& g = fine.graph;
        const MultiDigraph& h = coarse.graph;
        const BondingMap bond = bonding(s, n, n - 1);
        const Walk& prev = t.walks[n - 2];

        // Component refined at this step: the one holding vertex n-1.
        const std::string c_id = level_classes_of(s, n - 1, n)[n - 1];

        // First preimage of every coarse edge, in fine insertion order.
        std::map<std::string, int> preimage;
        for (int j = 0; j < g.edge_count(); ++j) {
            const EdgeImage& img = bond.edge_map[static_cast<std::size_t>(j)];
            if (!img.collapsed && !preimage.count(img.id))
                preimage.emplace(img.id, j);
        }
        auto lift = [&](int coarse_edge) {
            const auto it = preimage.find(h.edge(coarse_edge).id);
            if (it == preimage.end())
                throw InternalError("edge " + h.edge(coarse_edge).id +
                                    " has no preimage at level " +
                                    std::to_string(n));
            return it->second;
        };

        // The refined component's classes induce the fine counterpart of
        // the walk's excursions.
        MultiDigraph sub;
        for (int c = 0; c < g.vertex_count(); ++c)
            if (bond.vertex_map[static_cast<std::size_t>(c)] == c_id)
                sub.add_vertex(g.vertex_id(c));
        for (const Edge& e : g.edges())
            if (sub.find_vertex(g.vertex_id(e.tail)) &&
                sub.find_vertex(g.vertex_id(e.head)))
                sub.add_edge(e.id, g.vertex_id(e.tail), g.vertex_id(e.head),
                             e.kind, e.origin);

        Walk wn;
        auto append_edge = [&](int ei) {
            const Edge& e = g.edge(ei);
            if (wn.vertices.empty() || wn.vertices.back() != e.tail)
                throw InternalError("walk splice discontinuity at " + e.id);
            wn.edges.push_back(ei);
            wn.vertices.push_back(e.head);
        };
        // Spanning excursion through the refined component, from the head
        // of one lifted edge to the tail of the next.
        auto append_excursion = [&](int from_edge, int to_edge) {
            const int start = *sub.find_vertex(g.vertex_id(g.edge(from_edge).head));
            const int goal = *sub.find_vertex(g.vertex_id(g.edge(to_edge).tail));
            Walk q;
            try {
                q = closed_spanning_walk(sub, start);
            } catch (const NotStronglyConnectedError& e) {
                throw NotStronglyConnectedError(class_witness(s, e.from()),
                                                class_witness(s, e.to()), n);
            }
            if (goal != start) {
                const auto p = shortest_path(sub, start, goal);
                if (!p)
                    throw InternalError("refined component lost a path");
                q.edges.insert(q.edges.end(), p->edges.begin(), p->edges.end());
                q.vertices.insert(q.vertices.end(), p->vertices.begin() + 1,
                                  p->vertices.end());
            }
            for (int ei : q.edges)
                append_edge(*g.find_edge(sub.edge(ei).id));
        };

        const std::size_t k = prev.edges.size();
        if (k == 0) {
            // Degenerate single-class walk: the whole fine level descends
            // from it.
            wn = closed_spanning_walk(g, 0);
        } else {
            const bool starts_inside =
                h.vertex_id(prev.vertices.front()) == c_id;
            if (starts_inside) {
                const int wrap = lift(prev.edges[k - 1]);
                wn.vertices.push_back(g.edge(wrap).head);
                append_excursion(wrap, lift(prev.edges[0]));
            } else {
                const auto start =
                    g.find_vertex(h.vertex_id(prev.vertices.front()));
                if (!start)
                    throw InternalError("class " +
                                        h.vertex_id(prev.vertices.front()) +
                                        " vanished at level " +
                                        std::to_string(n));
                wn.vertices.push_back(*start);
            }
            for (std::size_t i = 0; i < k; ++i) {
                append_edge(lift(prev.edges[i]));
                if (i + 1 < k && h.vertex_id(prev.vertices[i + 1]) == c_id)
                    append_excursion(lift(prev.edges[i]),
                                     lift(prev.edges[i + 1]));
            }
        }
        const WalkVerdict check = is_valid_walk(
            g, wn, WalkRequirements{/*closed=*/true, /*spanning=*/true});
        if (!check.ok)
            throw InternalError("spanning walk recursion broke at level " +
                                std::to_string(n) + ": " + check.violation);
        t.walks.push_back(std::move(wn));
    }
    return t;
}

ThreadVerdict verify_thread(const Source& s, const TourThread& t) {
    if (t.walks.empty()) return {false, "thread has no levels"};
    QuotientLevel prev;
    for (std::size_t n = 0; n < t.walks.size(); ++n) {
        QuotientLevel lv = level(s, n);
        if (n == 0) {
            const auto a = lv.graph.find_vertex(t.anchor);
            if (!a || t.walks[0].vertices.empty() ||
                t.walks[0].vertices.front() != *a)
                return {false, "anchor mismatch at level 0"};
        }
        const WalkVerdict v = is_valid_walk(
            lv.graph, t.walks[n],
            WalkRequirements{/*closed=*/true, /*spanning=*/false,
                             /*eulerian=*/true});
        if (!v.ok)
            return {false,
                    "level " + std::to_string(n) + ": " + v.violation};
        if (n > 0) {
            const BondingMap b = bonding(s, n, n - 1);
            if (!(project_walk(lv, prev, b, t.walks[n]) == t.walks[n - 1]))
                return {false,
                        "projection mismatch at level " + std::to_string(n)};
        }
        prev = std::move(lv);
    }
    return {};
}

ThreadVerdict verify_thread(const Source& s, const WalkThread& t) {
    if (t.walks.empty()) return {false, "thread has no levels"};
    QuotientLevel prev;
    for (std::size_t i = 0; i < t.walks.size(); ++i) {
        const std::size_t n = i + 1;
        QuotientLevel lv = level(s, n);
        const WalkVerdict v = is_valid_walk(
            lv.graph, t.walks[i],
            WalkRequirements{/*closed=*/true, /*spanning=*/true});
        if (!v.ok)
            return {false,
                    "level " + std::to_string(n) + ": " + v.violation};
        if (i > 0) {
            const BondingMap b = bonding(s, n, n - 1);
            if (!(project_walk(lv, prev, b, t.walks[i]) == t.walks[i - 1]))
                return {false,
                        "projection mismatch at level " + std::to_string(n)};
        }
        prev = std::move(lv);
    }
    return {};
}

ThreadVerdict check_jumping_arc(const QuotientLevel& lv, const Cut& cut,
                                const Walk& w) {
    const MultiDigraph& g = lv.graph;
    std::vector<int> side(static_cast<std::size_t>(g.vertex_count()), -1);
    auto place = [&](const std::vector<int>& ids, int which) {
        for (int v : ids) {
            if (v < 0 || v >= g.vertex_count())
                throw Error(Err::SideNotClassAligned,
                            "class index " + std::to_string(v) +
                                " out of range at level " +
                                std::to_string(lv.index));
            if (side[static_cast<std::size_t>(v)] != -1)
                throw Error(Err::SideNotClassAligned,
                            "class " + g.vertex_id(v) + " listed twice");
            side[static_cast<std::size_t>(v)] = which;
        }
    };
    place(cut.side1, 0);
    place(cut.side2, 1);
    if (cut.side1.empty() || cut.side2.empty())
        throw Error(Err::SideNotClassAligned, "cut side is empty");
    for (int v = 0; v < g.vertex_count(); ++v)
        if (side[static_cast<std::size_t>(v)] == -1)
            throw Error(Err::SideNotClassAligned,
                        "class " + g.vertex_id(v) + " on neither side");

    const WalkVerdict fit = is_valid_walk(g, w, WalkRequirements{});
    if (!fit.ok) return {false, "invalid walk: " + fit.violation};

    auto side_of = [&](std::size_t pos) {
        return side[static_cast<std::size_t>(w.vertices[pos])];
    };
    for (std::size_t p = 0; p + 1 < w.vertices.size(); ++p) {
        if (side_of(p) != 0 || side_of(p + 1) != 1) continue;
        // Maximal segment around the transition: extend left through
        // side1, right through side2.
        std::size_t lo = p;
        while (lo > 0 && side_of(lo - 1) == 0) --lo;
        std::size_t hi = p + 1;
        while (hi + 1 < w.vertices.size() && side_of(hi + 1) == 1) ++hi;
        bool crossed = false;
        for (std::size_t e = lo; e < hi; ++e) {
            const Edge& edge = g.edge(w.edges[e]);
            if (side[static_cast<std::size_t>(edge.tail)] == 0 &&
                side[static_cast<std::size_t>(edge.head)] == 1) {
                crossed = true;
                break;
            }
        }
        if (!crossed)
            return {false, "segment entering side2 at position " +
                               std::to_string(p + 1) +
                               " traverses no crossing edge"};
    }
    return {};
}

} // namespace endspace
