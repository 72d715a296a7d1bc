#ifndef ENDSPACE_ENDS_HPP
#define ENDSPACE_ENDS_HPP

#include <optional>
#include <string>
#include <vector>

#include "endspace/quotient.hpp"
#include "endspace/source.hpp"

namespace endspace {

// Strong component at one level, linked to the component one level up that
// contains it.
struct ComponentNode {
    std::string id;
    std::size_t rep_index = 0;
    Card size;
    // Index into the previous level's node list; unset at level 0.
    std::optional<std::size_t> parent;
};

struct ComponentTree {
    std::vector<std::vector<ComponentNode>> levels; // [n] ascending rep
    Certainty certainty = Certainty::Exact;
};

ComponentTree component_tree(const Source& s, std::size_t n_max);

// A consistent choice of one infinite component per level: the finite shadow
// of an end.
struct EndThread {
    std::vector<std::string> classes; // classes[n] = component id at level n
    Certainty certainty = Certainty::Exact;
};

// Per-level reference of an edge-direction thread: the bundle between the
// two endpoint classes where they are separated, otherwise the single
// component containing both.
struct EdgeLevelRef {
    bool separated = false;
    std::string from, to; // equal when not separated
};

struct LimitEdgeThread {
    // Endpoints: an end (index into the end-thread list) or a vertex.
    bool tail_is_vertex = false;
    std::string tail_vertex;
    std::size_t tail_end = 0;
    bool head_is_vertex = false;
    std::string head_vertex;
    std::size_t head_end = 0;
    std::vector<EdgeLevelRef> levels;
    Certainty certainty = Certainty::Exact;
};

// Everything the end-space analysis produces at one depth.
struct EndSpace {
    std::size_t depth = 0;
    ComponentTree tree;
    std::vector<QuotientLevel> levels; // 0..depth
    std::vector<EndThread> ends;
    std::vector<LimitEdgeThread> limit_edges;
    Certainty certainty = Certainty::Exact;
};

EndSpace end_space(const Source& s, std::size_t depth);

// Combinatorial basic open neighbourhood of an end at one level: its
// component class, the threads living inside, and the boundary edges.
struct BasicOpen {
    std::size_t level = 0;
    std::string class_id;
    std::vector<std::size_t> ends_inside;        // indices into es.ends
    std::vector<std::size_t> limit_edges_inside; // indices into es.limit_edges
    std::vector<std::string> boundary_edges;     // level-graph edge ids
    Certainty certainty = Certainty::Exact;
};

BasicOpen basic_open(const EndSpace& es, std::size_t end_index, std::size_t n);

// Finite prefix of a necklace: disjoint strongly connected beads joined by
// paths in both directions, each bead meeting every watched set.
struct NecklacePrefix {
    std::vector<std::vector<std::string>> beads;
    std::vector<std::vector<std::string>> forward;  // path bead i -> i+1
    std::vector<std::vector<std::string>> backward; // path bead i+1 -> i
    std::vector<USet> sets;                         // the watched family
    // attachment[u][k]: bead k meets sets[u] inside the search window.
    std::vector<std::vector<bool>> attachment;
    std::size_t depth = 0;
    Certainty certainty = Certainty::Exact;
};

std::optional<NecklacePrefix> necklace_search(const Source& s,
                                              const std::vector<USet>& us,
                                              std::size_t beads,
                                              std::size_t depth);

struct NecklaceVerdict {
    bool ok = true;
    std::string violation;
};

NecklaceVerdict verify_necklace(const Source& s, const NecklacePrefix& p,
                                std::size_t depth);

// Bounded shadow of the rank recursion: Rank(r) when separators of size at
// most sep_bound drawn from the first `depth` vertices certify that every
// strong component fragments to finite traces within r rounds.
struct RankResult {
    bool has_rank = false;
    std::size_t rank = 0;  // valid when has_rank
    std::size_t r_max = 0;
    std::optional<std::string> finite_u;  // Rank(0): the set with finite trace
    std::vector<std::string> witnesses;   // one line per certified separator
    Certainty certainty = Certainty::Exact;
};

RankResult rank_search(const Source& s, const std::vector<USet>& us,
                       std::size_t r_max, std::size_t sep_bound,
                       std::size_t depth);

} // namespace endspace

#endif
