#ifndef ENDSPACE_PARALLEL_HPP
#define ENDSPACE_PARALLEL_HPP

#include <cstddef>
#include <vector>

#include "endspace/quotient.hpp"

namespace endspace {

enum class ExecMode { Serial, Parallel };

// Levels 0..n_max of the partition chain, stopping at saturation.  Levels
// are independent of one another, so the parallel mode distributes the
// level index over threads; both modes return identical values and throw
// the same error for the same input (the one belonging to the smallest
// failing level).  Serial mode is the reference the tests compare against.
std::vector<QuotientLevel> compute_levels(const Source& s, std::size_t n_max,
                                          ExecMode mode);

// Cut sizes for many sides of the same graph at once, aligned with the
// input.  Each side is a vector of vertex indices as in cut_sizes.
std::vector<Cut> cut_sweep(const MultiDigraph& g,
                           const std::vector<std::vector<int>>& sides,
                           ExecMode mode);

} // namespace endspace

#endif
