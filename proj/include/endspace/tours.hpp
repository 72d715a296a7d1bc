#ifndef ENDSPACE_TOURS_HPP
#define ENDSPACE_TOURS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "endspace/quotient.hpp"

namespace endspace {

// Verdict of the Euler condition scan.  When ok is false exactly one
// witness is set: an infinite-degree vertex, or an unbalanced cut with its
// sides listed as class ids (level cuts) or vertex ids (truncation cuts).
struct EulerVerdict {
    bool ok = true;
    bool infinite_degree = false;
    std::string vertex;
    std::vector<std::string> side1, side2;
    std::int64_t forward = 0;
    std::int64_t backward = 0;
    Certainty certainty = Certainty::Exact;
};

// Scans, in order: vertex degrees per oracle, cuts of every level graph
// induced by down-closed sets of the condensation order, singleton-vs-rest
// cuts of the truncation, and (for finite sources with at most 12 vertices)
// all bipartitions.  Cuts crossed by a quotient edge stand for infinite
// cuts and are exempt from the balance requirement.
EulerVerdict check_euler(const Source& s, std::size_t n_max);

// Per-level Euler tours agreeing under projection.  walks[n] lives on the
// level-n graph; complete is false when the search dead-ended early and
// the thread holds the deepest prefix reached.
struct TourThread {
    std::string anchor;
    std::vector<Walk> walks;
    bool complete = false;
    Certainty certainty = Certainty::Exact;
};

// Depth-first search over per-level Euler tours compatible with the level
// below, in canonical order (candidate anchor classes by insertion order,
// tours lexicographically).  Throws EulerConditionFailed when check_euler
// finds a witness, and UnknownComponent for a bad anchor.
TourThread lift_euler(const Source& s, std::size_t n_max,
                      const std::string& anchor,
                      std::uint64_t tour_limit = 64);

// Closed spanning walks W_1..W_N with exact projections; walks[i] lives on
// the level-(i+1) graph.
struct WalkThread {
    std::vector<Walk> walks;
    Certainty certainty = Certainty::Exact;
};

// The spanning-walk recursion: W_1 is the canonical closed spanning walk
// of level 1; W_n arises from W_{n-1} by lifting each edge and splicing a
// canonical spanning walk of the refined component between consecutive
// visits.  Throws NotStronglyConnectedError at the first level that is not
// strongly connected, with representative source vertices as the witness.
WalkThread span_walk(const Source& s, std::size_t n_max);

// Image of a walk under a bonding map with stationary repetitions erased:
// collapsed edges vanish and their endpoints merge.  Throws LevelMismatch
// when the walk or the map do not fit the given levels.
Walk project_walk(const QuotientLevel& from, const QuotientLevel& to,
                  const BondingMap& b, const Walk& w);

struct ThreadVerdict {
    bool ok = true;
    std::string violation;
};

// Recomputes levels and bonding maps and checks every thread invariant:
// per-level walk properties and literal projection equality.
ThreadVerdict verify_thread(const Source& s, const TourThread& t);
ThreadVerdict verify_thread(const Source& s, const WalkThread& t);

// Every maximal segment of w that starts in side1 and ends in side2 must
// traverse an edge from a side1 class to a side2 class.  The cut sides are
// class indices of the level graph and must partition its classes;
// otherwise SideNotClassAligned.
ThreadVerdict check_jumping_arc(const QuotientLevel& lv, const Cut& cut,
                                const Walk& w);

} // namespace endspace

#endif
