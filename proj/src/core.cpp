#include "endspace/core.hpp"

#include <algorithm>
#include <deque>

namespace endspace {

namespace {

// Iterative Tarjan; components pop in reverse topological order.
struct TarjanState {
    const MultiDigraph& g;
    std::vector<int> index, low, comp;
    std::vector<bool> on_stack;
    std::vector<int> stack;
    int next_index = 0;
    int comp_count = 0;

    explicit TarjanState(const MultiDigraph& g)
        : g(g), index(g.vertex_count(), -1), low(g.vertex_count(), 0),
          comp(g.vertex_count(), -1), on_stack(g.vertex_count(), false) {}

    void run(int root) {
        struct Frame { int v; std::size_t ei; };
        std::vector<Frame> frames{{root, 0}};
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            const auto& outs = g.out_edges(f.v);
            if (f.ei < outs.size()) {
                int w = g.edge(outs[f.ei++]).head;
                if (index[w] < 0) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                int v = f.v;
                frames.pop_back();
                if (!frames.empty())
                    low[frames.back().v] = std::min(low[frames.back().v], low[v]);
                if (low[v] == index[v]) {
                    while (true) {
                        int w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        comp[w] = comp_count;
                        if (w == v) break;
                    }
                    ++comp_count;
                }
            }
        }
    }
};

} // namespace

SccResult strong_components(const MultiDigraph& g) {
    TarjanState t(g);
    for (int v = 0; v < g.vertex_count(); ++v)
        if (t.index[v] < 0) t.run(v);
    SccResult r;
    r.component_of.resize(g.vertex_count());
    r.members.resize(t.comp_count);
    // Tarjan pop order is reverse topological; flip so edges go low -> high.
    for (int v = 0; v < g.vertex_count(); ++v) {
        int c = t.comp_count - 1 - t.comp[v];
        r.component_of[v] = c;
        r.members[c].push_back(v);
    }
    return r;
}

Cut cut_sizes(const MultiDigraph& g, const std::vector<int>& side1) {
    std::vector<bool> in1(g.vertex_count(), false);
    for (int v : side1) {
        if (v < 0 || v >= g.vertex_count())
            throw Error(Err::UnknownVertex, "cut side vertex out of range");
        in1[v] = true;
    }
    Cut c;
    for (int v = 0; v < g.vertex_count(); ++v)
        (in1[v] ? c.side1 : c.side2).push_back(v);
    if (c.side1.empty() || c.side2.empty())
        throw Error(Err::EmptySide, "cut side is empty");
    for (const Edge& e : g.edges()) {
        if (in1[e.tail] && !in1[e.head]) ++c.forward;
        else if (!in1[e.tail] && in1[e.head]) ++c.backward;
    }
    return c;
}

Degrees vertex_degrees(const MultiDigraph& g) {
    Degrees d;
    d.in.resize(g.vertex_count());
    d.out.resize(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) {
        d.in[v] = g.in_degree(v);
        d.out[v] = g.out_degree(v);
    }
    return d;
}

bool underlying_connected_nonisolated(const MultiDigraph& g) {
    int start = -1;
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.out_degree(v) + g.in_degree(v) > 0) { start = v; break; }
    if (start < 0) return true; // no edges at all
    std::vector<bool> seen(g.vertex_count(), false);
    std::deque<int> q{start};
    seen[start] = true;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int e : g.out_edges(v))
            if (!seen[g.edge(e).head]) { seen[g.edge(e).head] = true; q.push_back(g.edge(e).head); }
        for (int e : g.in_edges(v))
            if (!seen[g.edge(e).tail]) { seen[g.edge(e).tail] = true; q.push_back(g.edge(e).tail); }
    }
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.out_degree(v) + g.in_degree(v) > 0 && !seen[v]) return false;
    return true;
}

std::optional<Walk> find_euler_tour(const MultiDigraph& g) {
    if (g.vertex_count() == 0) return std::nullopt;
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.in_degree(v) != g.out_degree(v)) return std::nullopt;
    if (!underlying_connected_nonisolated(g)) return std::nullopt;
    int anchor = 0;
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.out_degree(v) > 0) { anchor = v; break; }
    // Hierholzer, always following the smallest unused out-edge; splices
    // close sub-tours on backtrack.
    std::vector<std::size_t> ptr(g.vertex_count(), 0);
    std::vector<std::pair<int, int>> st{{anchor, -1}};
    std::vector<int> tour_edges;
    while (!st.empty()) {
        int v = st.back().first;
        if (ptr[v] < g.out_edges(v).size()) {
            int e = g.out_edges(v)[ptr[v]++];
            st.push_back({g.edge(e).head, e});
        } else {
            int e = st.back().second;
            st.pop_back();
            if (e >= 0) tour_edges.push_back(e);
        }
    }
    std::reverse(tour_edges.begin(), tour_edges.end());
    if (tour_edges.size() != static_cast<std::size_t>(g.edge_count()))
        return std::nullopt; // unreachable given the checks above
    Walk w;
    w.vertices.push_back(anchor);
    for (int e : tour_edges) {
        w.edges.push_back(e);
        w.vertices.push_back(g.edge(e).head);
    }
    return w;
}

TourList enumerate_euler_tours(const MultiDigraph& g, int anchor,
                               std::uint64_t limit) {
    if (anchor < 0 || anchor >= g.vertex_count())
        throw Error(Err::UnknownVertex, "anchor out of range");
    TourList out;
    if (g.edge_count() == 0) {
        out.tours.push_back(Walk{{anchor}, {}});
        if (limit == 0) { out.tours.clear(); out.overflow = true; }
        return out;
    }
    std::vector<bool> used(g.edge_count(), false);
    Walk cur;
    cur.vertices.push_back(anchor);
    std::size_t total = static_cast<std::size_t>(g.edge_count());
    bool stop = false;
    // Depth-first over unused out-edges in ascending index order; emits in
    // lexicographic order of edge index sequences.
    auto rec = [&](auto&& self, int v) -> void {
        if (stop) return;
        if (cur.edges.size() == total) {
            if (v == anchor) {
                if (out.tours.size() < limit) {
                    out.tours.push_back(cur);
                } else {
                    out.overflow = true;
                    stop = true;
                }
            }
            return;
        }
        for (int e : g.out_edges(v)) {
            if (used[e]) continue;
            used[e] = true;
            cur.edges.push_back(e);
            cur.vertices.push_back(g.edge(e).head);
            self(self, g.edge(e).head);
            cur.edges.pop_back();
            cur.vertices.pop_back();
            used[e] = false;
            if (stop) return;
        }
    };
    rec(rec, anchor);
    return out;
}

std::optional<Walk> shortest_path(const MultiDigraph& g, int from, int to) {
    if (from < 0 || from >= g.vertex_count() || to < 0 || to >= g.vertex_count())
        throw Error(Err::UnknownVertex, "path endpoint out of range");
    // Distances to `to` over reversed edges, then a greedy forward walk
    // taking the smallest edge that decreases the distance; this is the
    // lexicographically smallest shortest path by edge ids.
    std::vector<int> dist(g.vertex_count(), -1);
    std::deque<int> q{to};
    dist[to] = 0;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int e : g.in_edges(v)) {
            int u = g.edge(e).tail;
            if (dist[u] < 0) { dist[u] = dist[v] + 1; q.push_back(u); }
        }
    }
    if (dist[from] < 0) return std::nullopt;
    Walk w;
    w.vertices.push_back(from);
    int cur = from;
    while (cur != to) {
        bool advanced = false;
        for (int e : g.out_edges(cur)) {
            int h = g.edge(e).head;
            if (dist[h] == dist[cur] - 1) {
                w.edges.push_back(e);
                w.vertices.push_back(h);
                cur = h;
                advanced = true;
                break;
            }
        }
        if (!advanced) throw InternalError("shortest path reconstruction stuck");
    }
    return w;
}

std::optional<std::pair<int, int>> first_unreachable_pair(const MultiDigraph& g) {
    int n = g.vertex_count();
    for (int v = 0; v < n; ++v) {
        std::vector<bool> seen(n, false);
        std::deque<int> q{v};
        seen[v] = true;
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            for (int e : g.out_edges(u)) {
                int h = g.edge(e).head;
                if (!seen[h]) { seen[h] = true; q.push_back(h); }
            }
        }
        for (int w = 0; w < n; ++w)
            if (!seen[w]) return std::make_pair(v, w);
    }
    return std::nullopt;
}

Walk closed_spanning_walk(const MultiDigraph& g, int anchor) {
    if (anchor < 0 || anchor >= g.vertex_count())
        throw Error(Err::UnknownVertex, "anchor out of range");
    if (auto bad = first_unreachable_pair(g))
        throw NotStronglyConnectedError(g.vertex_id(bad->first),
                                        g.vertex_id(bad->second), 0);
    Walk w;
    w.vertices.push_back(anchor);
    std::vector<bool> visited(g.vertex_count(), false);
    visited[anchor] = true;
    int cur = anchor;
    for (int target = 0; target < g.vertex_count(); ++target) {
        if (visited[target]) continue;
        auto p = shortest_path(g, cur, target);
        if (!p) throw InternalError("strongly connected graph lost a path");
        for (std::size_t i = 0; i < p->edges.size(); ++i) {
            w.edges.push_back(p->edges[i]);
            w.vertices.push_back(p->vertices[i + 1]);
            visited[p->vertices[i + 1]] = true;
        }
        cur = target;
    }
    if (cur != anchor) {
        auto p = shortest_path(g, cur, anchor);
        if (!p) throw InternalError("strongly connected graph lost a path");
        for (std::size_t i = 0; i < p->edges.size(); ++i) {
            w.edges.push_back(p->edges[i]);
            w.vertices.push_back(p->vertices[i + 1]);
        }
    }
    return w;
}

WalkVerdict is_valid_walk(const MultiDigraph& g, const Walk& w,
                          const WalkRequirements& req) {
    auto fail = [](const char* why, std::size_t at) {
        return WalkVerdict{false, why, at};
    };
    if (w.vertices.empty()) return fail("empty", 0);
    if (w.vertices.size() != w.edges.size() + 1)
        return fail("length_mismatch", 0);
    for (std::size_t i = 0; i < w.vertices.size(); ++i)
        if (w.vertices[i] < 0 || w.vertices[i] >= g.vertex_count())
            return fail("vertex_out_of_range", i);
    for (std::size_t i = 0; i < w.edges.size(); ++i) {
        int e = w.edges[i];
        if (e < 0 || e >= g.edge_count()) return fail("edge_out_of_range", i);
        if (g.edge(e).tail != w.vertices[i] || g.edge(e).head != w.vertices[i + 1])
            return fail("edge_not_incident", i);
    }
    if (req.closed && w.vertices.front() != w.vertices.back())
        return fail("not_closed", w.vertices.size() - 1);
    if (req.spanning) {
        std::vector<bool> seen(g.vertex_count(), false);
        for (int v : w.vertices) seen[v] = true;
        for (int v = 0; v < g.vertex_count(); ++v)
            if (!seen[v]) return fail("not_spanning", static_cast<std::size_t>(v));
    }
    if (req.eulerian) {
        std::vector<bool> used(g.edge_count(), false);
        for (std::size_t i = 0; i < w.edges.size(); ++i) {
            if (used[w.edges[i]]) return fail("edge_repeated", i);
            used[w.edges[i]] = true;
        }
        for (int e = 0; e < g.edge_count(); ++e)
            if (!used[e]) return fail("edges_unused", static_cast<std::size_t>(e));
    }
    return WalkVerdict{};
}

} // namespace endspace
