#ifndef ENDSPACE_CORE_HPP
#define ENDSPACE_CORE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "endspace/multidigraph.hpp"

namespace endspace {

// Strong components in a topological order of the condensation (edges run
// from lower to higher component label).  component_of[v] is the label of
// v's component; members lists components in label order, each sorted by
// vertex index.
struct SccResult {
    std::vector<int> component_of;
    std::vector<std::vector<int>> members;

    int count() const { return static_cast<int>(members.size()); }
};

SccResult strong_components(const MultiDigraph& g);

// Cut induced by side1 (vertex indices); the complement is side2.
// Throws EmptySide if either side is empty, UnknownVertex on bad indices.
Cut cut_sizes(const MultiDigraph& g, const std::vector<int>& side1);

struct Degrees {
    std::vector<int> in, out;
    bool balanced() const {
        for (std::size_t i = 0; i < in.size(); ++i)
            if (in[i] != out[i]) return false;
        return true;
    }
};

Degrees vertex_degrees(const MultiDigraph& g);

// Deterministic Euler tour: lowest-edge-id-first splicing, anchored at the
// smallest vertex carrying an edge (or vertex 0 when the graph has no
// edges but at least one vertex).  None when no Euler tour exists.
std::optional<Walk> find_euler_tour(const MultiDigraph& g);

struct TourList {
    std::vector<Walk> tours;
    bool overflow = false; // true when more tours exist than the limit
};

// All Euler tours anchored at `anchor`, in lexicographic order of their
// edge index sequences.  Complete when tours.size() <= limit, else the
// first `limit` with overflow set.
TourList enumerate_euler_tours(const MultiDigraph& g, int anchor,
                               std::uint64_t limit);

// Deterministic closed walk through every vertex: repeatedly walks a
// shortest path (ties by smallest edge id) to the smallest-id unvisited
// vertex, then returns to the anchor.  Requires strong connectivity;
// throws NotStronglyConnectedError with the first unreachable ordered
// pair in id order otherwise.
Walk closed_spanning_walk(const MultiDigraph& g, int anchor);

// Lexicographically smallest shortest path from `from` to `to`, as a Walk.
// Empty optional when unreachable.
std::optional<Walk> shortest_path(const MultiDigraph& g, int from, int to);

struct WalkRequirements {
    bool closed = false;
    bool spanning = false;
    bool eulerian = false;
};

struct WalkVerdict {
    bool ok = true;
    std::string violation;     // empty when ok
    std::size_t index = 0;     // position in the walk where it fails

    explicit operator bool() const { return ok; }
};

WalkVerdict is_valid_walk(const MultiDigraph& g, const Walk& w,
                          const WalkRequirements& req);

// True when every vertex that carries an edge can reach every other such
// vertex in the underlying undirected graph.
bool underlying_connected_nonisolated(const MultiDigraph& g);

// First ordered vertex pair (v, w), scanned in index order, with no
// directed v -> w path; nullopt when strongly connected.
std::optional<std::pair<int, int>> first_unreachable_pair(const MultiDigraph& g);

} // namespace endspace

#endif
