#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "endspace/core.hpp"
#include "endspace/multidigraph.hpp"

using namespace endspace;

namespace {

// ---- independent oracles ----

// Reachability by transitive closure; reach[i][j] true iff a directed path
// (possibly empty) runs from i to j.
std::vector<std::vector<bool>> reach_oracle(const MultiDigraph& g) {
    int n = g.vertex_count();
    std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) r[i][i] = true;
    for (const Edge& e : g.edges()) r[e.tail][e.head] = true;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            if (r[i][k])
                for (int j = 0; j < n; ++j)
                    if (r[k][j]) r[i][j] = true;
    return r;
}

// Cut sizes by a plain scan over the edge list.
std::pair<std::int64_t, std::int64_t> cut_oracle(const MultiDigraph& g,
                                                 const std::vector<bool>& in1) {
    std::int64_t fwd = 0, bwd = 0;
    for (const Edge& e : g.edges()) {
        if (in1[e.tail] && !in1[e.head]) ++fwd;
        if (!in1[e.tail] && in1[e.head]) ++bwd;
    }
    return {fwd, bwd};
}

// Exhaustive backtracking over edge orders; true iff some closed walk uses
// every edge exactly once.
bool euler_rec(const MultiDigraph& g, int v, int anchor, std::vector<bool>& used,
               int remaining) {
    if (remaining == 0) return v == anchor;
    for (int e : g.out_edges(v)) {
        if (used[e]) continue;
        used[e] = true;
        if (euler_rec(g, g.edge(e).head, anchor, used, remaining - 1)) return true;
        used[e] = false;
    }
    return false;
}

bool euler_exists_oracle(const MultiDigraph& g) {
    if (g.vertex_count() == 0) return false;
    if (g.edge_count() == 0) return true;
    int anchor = -1;
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.out_degree(v) > 0) { anchor = v; break; }
    if (anchor < 0) return false;
    std::vector<bool> used(g.edge_count(), false);
    return euler_rec(g, anchor, anchor, used, g.edge_count());
}

// All closed Euler edge sequences from `anchor`, by exhaustive search.
void euler_all_rec(const MultiDigraph& g, int v, int anchor,
                   std::vector<bool>& used, std::vector<int>& cur,
                   std::vector<std::vector<int>>& out) {
    if (cur.size() == static_cast<std::size_t>(g.edge_count())) {
        if (v == anchor) out.push_back(cur);
        return;
    }
    for (int e = 0; e < g.edge_count(); ++e) {
        if (used[e] || g.edge(e).tail != v) continue;
        used[e] = true;
        cur.push_back(e);
        euler_all_rec(g, g.edge(e).head, anchor, used, cur, out);
        cur.pop_back();
        used[e] = false;
    }
}

std::vector<std::vector<int>> euler_all_oracle(const MultiDigraph& g, int anchor) {
    std::vector<std::vector<int>> out;
    std::vector<bool> used(g.edge_count(), false);
    std::vector<int> cur;
    euler_all_rec(g, anchor, anchor, used, cur, out);
    return out;
}

// The 4-vertex digraph with edge set given by `mask` over the 12 ordered
// pairs (i, j), i != j, in row-major order.
MultiDigraph graph_from_mask(std::uint32_t mask) {
    MultiDigraph g;
    for (int i = 0; i < 4; ++i) g.add_vertex("v" + std::to_string(i));
    int bit = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (i == j) continue;
            if (mask & (1u << bit))
                g.add_edge_by_index("e" + std::to_string(bit), i, j);
            ++bit;
        }
    return g;
}

MultiDigraph cycle(int n) {
    MultiDigraph g;
    for (int i = 0; i < n; ++i) g.add_vertex("c" + std::to_string(i));
    for (int i = 0; i < n; ++i)
        g.add_edge_by_index("e" + std::to_string(i), i, (i + 1) % n);
    return g;
}

} // namespace

TEST_CASE("construction rejects loops, duplicates and second quotient edges") {
    MultiDigraph g;
    g.add_vertex("a");
    g.add_vertex("b");
    CHECK_THROWS_AS(g.add_edge("l", "a", "a"), Error);
    CHECK_THROWS_AS(g.add_vertex("a"), Error);
    g.add_edge("q", "a", "b", EdgeKind::Quotient);
    CHECK_THROWS_AS(g.add_edge("q2", "a", "b", EdgeKind::Quotient), Error);
    g.add_edge("q3", "b", "a", EdgeKind::Quotient); // opposite pair is fine
    g.add_edge("c1", "a", "b");                     // concrete next to quotient
    CHECK_THROWS_AS(g.add_edge("q", "b", "a"), Error);
    CHECK_THROWS_AS(g.add_edge("x", "a", "zz"), Error);
}

TEST_CASE("strong components agree with the reachability oracle on all 4096 "
          "digraphs over 4 labelled vertices") {
    for (std::uint32_t mask = 0; mask < (1u << 12); ++mask) {
        MultiDigraph g = graph_from_mask(mask);
        auto reach = reach_oracle(g);
        SccResult scc = strong_components(g);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                bool same = reach[i][j] && reach[j][i];
                REQUIRE((scc.component_of[i] == scc.component_of[j]) == same);
            }
        // topological order of the condensation
        for (const Edge& e : g.edges())
            REQUIRE(scc.component_of[e.tail] <= scc.component_of[e.head]);
        // members listed in label order, sorted, covering every vertex
        int total = 0;
        for (int c = 0; c < scc.count(); ++c) {
            REQUIRE(!scc.members[c].empty());
            REQUIRE(std::is_sorted(scc.members[c].begin(), scc.members[c].end()));
            total += static_cast<int>(scc.members[c].size());
        }
        REQUIRE(total == 4);
    }
}

TEST_CASE("cut_sizes matches the edge-scan oracle on sampled 6-vertex digraphs") {
    std::uint64_t seed = 0x2545F4914F6CDD1Dull;
    for (int trial = 0; trial < 200; ++trial) {
        MultiDigraph g;
        for (int i = 0; i < 6; ++i) g.add_vertex("v" + std::to_string(i));
        int eid = 0;
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) {
                if (i == j) continue;
                seed = seed * 6364136223846793005ull + 1442695040888963407ull;
                if ((seed >> 33) & 1)
                    g.add_edge_by_index("e" + std::to_string(eid++), i, j);
            }
        seed = seed * 6364136223846793005ull + 1442695040888963407ull;
        std::uint32_t side_mask = (seed >> 40) % 62 + 1; // proper, nonempty
        std::vector<int> side1;
        std::vector<bool> in1(6, false);
        for (int v = 0; v < 6; ++v)
            if (side_mask & (1u << v)) { side1.push_back(v); in1[v] = true; }
        Cut c = cut_sizes(g, side1);
        auto [fwd, bwd] = cut_oracle(g, in1);
        CHECK(c.forward == fwd);
        CHECK(c.backward == bwd);
        CHECK(c.side1.size() + c.side2.size() == 6);
    }
}

TEST_CASE("cut_sizes validates sides") {
    MultiDigraph g = cycle(3);
    CHECK_THROWS_AS(cut_sizes(g, {}), Error);
    CHECK_THROWS_AS(cut_sizes(g, {0, 1, 2}), Error);
    CHECK_THROWS_AS(cut_sizes(g, {7}), Error);
    Cut c = cut_sizes(g, {0});
    CHECK(c.forward == 1);
    CHECK(c.backward == 1);
    CHECK(c.balanced());
}

TEST_CASE("Euler tour existence matches the exhaustive oracle on all 4096 "
          "digraphs over 4 labelled vertices") {
    for (std::uint32_t mask = 0; mask < (1u << 12); ++mask) {
        MultiDigraph g = graph_from_mask(mask);
        auto tour = find_euler_tour(g);
        bool oracle = euler_exists_oracle(g);
        REQUIRE(tour.has_value() == oracle);
        if (tour) {
            auto verdict = is_valid_walk(g, *tour, {true, false, true});
            REQUIRE(verdict.ok);
        }
    }
}

TEST_CASE("degree balance equals cut balance on finite digraphs") {
    for (std::uint32_t mask = 0; mask < (1u << 12); ++mask) {
        MultiDigraph g = graph_from_mask(mask);
        Degrees d = vertex_degrees(g);
        bool cuts_balanced = true;
        for (std::uint32_t side = 1; side < 15; ++side) {
            std::vector<int> side1;
            for (int v = 0; v < 4; ++v)
                if (side & (1u << v)) side1.push_back(v);
            if (!cut_sizes(g, side1).balanced()) { cuts_balanced = false; break; }
        }
        REQUIRE(d.balanced() == cuts_balanced);
    }
}

TEST_CASE("two 3-cycles sharing a vertex have exactly two Euler tours") {
    MultiDigraph g;
    for (const char* v : {"s", "a1", "a2", "b1", "b2"}) g.add_vertex(v);
    g.add_edge("e0", "s", "a1");
    g.add_edge("e1", "a1", "a2");
    g.add_edge("e2", "a2", "s");
    g.add_edge("e3", "s", "b1");
    g.add_edge("e4", "b1", "b2");
    g.add_edge("e5", "b2", "s");
    int anchor = 0;
    TourList tl = enumerate_euler_tours(g, anchor, 100);
    CHECK(!tl.overflow);
    REQUIRE(tl.tours.size() == 2);
    // lexicographic order of edge index sequences
    CHECK(tl.tours[0].edges < tl.tours[1].edges);
    auto oracle = euler_all_oracle(g, anchor);
    REQUIRE(oracle.size() == 2);
    std::sort(oracle.begin(), oracle.end());
    CHECK(tl.tours[0].edges == oracle[0]);
    CHECK(tl.tours[1].edges == oracle[1]);
    // limit cuts the list and raises the overflow flag
    TourList cut_list = enumerate_euler_tours(g, anchor, 1);
    CHECK(cut_list.overflow);
    CHECK(cut_list.tours.size() == 1);
    CHECK(cut_list.tours[0].edges == oracle[0]);
    // the deterministic single tour is in the complete list
    auto found = find_euler_tour(g);
    REQUIRE(found.has_value());
    CHECK((found->edges == tl.tours[0].edges || found->edges == tl.tours[1].edges));
}

TEST_CASE("a 3-cycle has exactly one anchored Euler tour") {
    MultiDigraph g = cycle(3);
    TourList tl = enumerate_euler_tours(g, 0, 10);
    CHECK(!tl.overflow);
    REQUIRE(tl.tours.size() == 1);
    CHECK(tl.tours[0].edges == std::vector<int>{0, 1, 2});
}

TEST_CASE("Euler tour of an edgeless graph is the empty closed walk") {
    MultiDigraph g;
    g.add_vertex("only");
    auto t = find_euler_tour(g);
    REQUIRE(t.has_value());
    CHECK(t->empty_walk());
    CHECK(t->closed());
    TourList tl = enumerate_euler_tours(g, 0, 10);
    REQUIRE(tl.tours.size() == 1);
    CHECK(tl.tours[0].empty_walk());
}

TEST_CASE("Euler tour enumeration agrees with the exhaustive oracle on "
          "balanced 4-vertex digraphs") {
    for (std::uint32_t mask = 0; mask < (1u << 12); ++mask) {
        MultiDigraph g = graph_from_mask(mask);
        if (g.edge_count() == 0 || !vertex_degrees(g).balanced()) continue;
        int anchor = -1;
        for (int v = 0; v < 4; ++v)
            if (g.out_degree(v) > 0) { anchor = v; break; }
        auto oracle = euler_all_oracle(g, anchor);
        std::sort(oracle.begin(), oracle.end());
        TourList tl = enumerate_euler_tours(g, anchor, 100000);
        REQUIRE(!tl.overflow);
        REQUIRE(tl.tours.size() == oracle.size());
        for (std::size_t i = 0; i < oracle.size(); ++i)
            REQUIRE(tl.tours[i].edges == oracle[i]);
    }
}

TEST_CASE("shortest_path picks the lexicographically smallest shortest path") {
    MultiDigraph g;
    for (const char* v : {"s", "m1", "m2", "t"}) g.add_vertex(v);
    g.add_edge("e0", "s", "m1");
    g.add_edge("e1", "s", "m2");
    g.add_edge("e2", "m1", "t");
    g.add_edge("e3", "m2", "t");
    auto p = shortest_path(g, 0, 3);
    REQUIRE(p.has_value());
    CHECK(p->edges == std::vector<int>{0, 2});
    CHECK(!shortest_path(g, 3, 0).has_value());
}

TEST_CASE("closed_spanning_walk spans, closes and reports disconnection") {
    MultiDigraph g = cycle(4);
    g.add_edge("chord", "c0", "c2");
    Walk w = closed_spanning_walk(g, 0);
    CHECK(is_valid_walk(g, w, {true, true, false}).ok);
    CHECK(w.vertices.front() == 0);

    MultiDigraph path;
    path.add_vertex("a");
    path.add_vertex("b");
    path.add_edge("e", "a", "b");
    try {
        closed_spanning_walk(path, 0);
        FAIL("expected NotStronglyConnectedError");
    } catch (const NotStronglyConnectedError& e) {
        CHECK(e.from() == "b");
        CHECK(e.to() == "a");
    }
}

TEST_CASE("closed_spanning_walk on a single vertex is the empty walk") {
    MultiDigraph g;
    g.add_vertex("x");
    Walk w = closed_spanning_walk(g, 0);
    CHECK(w.empty_walk());
    CHECK(is_valid_walk(g, w, {true, true, false}).ok);
}

TEST_CASE("is_valid_walk flags each violation at the right position") {
    MultiDigraph g = cycle(3);
    Walk good{{0, 1, 2, 0}, {0, 1, 2}};
    CHECK(is_valid_walk(g, good, {true, true, true}).ok);

    Walk teleport{{0, 2, 0}, {0, 2}}; // e0 ends at 1, not 2
    auto v1 = is_valid_walk(g, teleport, {});
    CHECK(!v1.ok);
    CHECK(v1.violation == "edge_not_incident");
    CHECK(v1.index == 0);

    Walk open_walk{{0, 1}, {0}};
    auto v2 = is_valid_walk(g, open_walk, {true, false, false});
    CHECK(!v2.ok);
    CHECK(v2.violation == "not_closed");

    Walk repeated{{0, 1, 2, 0, 1}, {0, 1, 2, 0}};
    auto v3 = is_valid_walk(g, repeated, {false, false, true});
    CHECK(!v3.ok);
    CHECK(v3.violation == "edge_repeated");
    CHECK(v3.index == 3); // second occurrence of e0

    Walk partial{{0, 1}, {0}};
    auto v4 = is_valid_walk(g, partial, {false, false, true});
    CHECK(!v4.ok);
    CHECK(v4.violation == "edges_unused");

    Walk not_spanning{{0, 1, 0}, {}};
    auto v5 = is_valid_walk(g, Walk{{0}, {}}, {false, true, false});
    CHECK(!v5.ok);
    CHECK(v5.violation == "not_spanning");
    CHECK(v5.index == 1);
}

TEST_CASE("condensation of the condensation is discrete") {
    std::uint64_t seed = 99;
    for (int trial = 0; trial < 50; ++trial) {
        MultiDigraph g;
        for (int i = 0; i < 7; ++i) g.add_vertex("v" + std::to_string(i));
        int eid = 0;
        for (int i = 0; i < 7; ++i)
            for (int j = 0; j < 7; ++j) {
                if (i == j) continue;
                seed = seed * 6364136223846793005ull + 1442695040888963407ull;
                if (((seed >> 35) & 3) == 0)
                    g.add_edge_by_index("e" + std::to_string(eid++), i, j);
            }
        SccResult scc = strong_components(g);
        MultiDigraph cond;
        for (int c = 0; c < scc.count(); ++c) cond.add_vertex("C" + std::to_string(c));
        int qid = 0;
        std::vector<std::vector<bool>> present(scc.count(),
                                               std::vector<bool>(scc.count(), false));
        for (const Edge& e : g.edges()) {
            int a = scc.component_of[e.tail], b = scc.component_of[e.head];
            if (a != b && !present[a][b]) {
                present[a][b] = true;
                cond.add_edge_by_index("q" + std::to_string(qid++), a, b);
            }
        }
        SccResult again = strong_components(cond);
        CHECK(again.count() == cond.vertex_count());
    }
}
