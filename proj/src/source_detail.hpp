#ifndef ENDSPACE_SOURCE_DETAIL_HPP
#define ENDSPACE_SOURCE_DETAIL_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "endspace/source.hpp"

namespace endspace {
namespace detail {

SourcePtr make_finite_source(
    const std::vector<std::pair<std::string, std::string>>& edge_tokens);

struct StencilRule {
    std::size_t from_slot = 0, to_slot = 0;
    int shift = 0; // -1, 0, +1
};

SourcePtr make_stencil_source(std::size_t width,
                              const std::vector<StencilRule>& rules);

// Strong components of g with the vertices in x removed.
struct CompGroup {
    std::size_t rep = 0;       // smallest member index
    std::vector<int> members;  // ascending
};

struct SubScc {
    std::vector<char> in_x;    // by vertex index
    std::vector<int> group_of; // -1 for removed vertices
    std::vector<CompGroup> groups; // ordered by rep
};

SubScc scc_minus(const MultiDigraph& g, const VSet& x);

// A bundle endpoint: a vertex of the separator or a component of D - X,
// the latter addressed as an index into SubScc::groups.
struct EndpointRef {
    bool is_vertex = false;
    std::size_t index = 0;
};

EndpointRef resolve_endpoint(const Source& s, const MultiDigraph& trunc,
                             const SubScc& sub, const VSet& x,
                             const std::string& token);

std::vector<SourceEdgeRef> scan_bundle(const MultiDigraph& trunc,
                                       const SubScc& sub, const EndpointRef& a,
                                       const EndpointRef& b);

} // namespace detail
} // namespace endspace

#endif
