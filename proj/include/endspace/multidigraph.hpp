#ifndef ENDSPACE_MULTIDIGRAPH_HPP
#define ENDSPACE_MULTIDIGRAPH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "endspace/base.hpp"

namespace endspace {

// A Quotient edge stands for an infinite bundle of parallel originals; a
// Concrete edge is one original edge (its origin names it).
enum class EdgeKind { Concrete, Quotient };

struct Edge {
    std::string id;
    int tail = -1;
    int head = -1;
    EdgeKind kind = EdgeKind::Concrete;
    std::string origin; // source edge id this one descends from, "" if none
};

// Finite multi-digraph.  Vertex and edge ids are opaque tokens; the canonical
// total order on both is insertion order, and every deterministic tie-break
// below ("smallest id") means smallest insertion index.
class MultiDigraph {
public:
    int add_vertex(const std::string& id);
    int add_edge(const std::string& id, const std::string& tail,
                 const std::string& head, EdgeKind kind = EdgeKind::Concrete,
                 const std::string& origin = "");
    int add_edge_by_index(const std::string& id, int tail, int head,
                          EdgeKind kind = EdgeKind::Concrete,
                          const std::string& origin = "");

    int vertex_count() const { return static_cast<int>(vertex_ids_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    const std::string& vertex_id(int i) const { return vertex_ids_.at(i); }
    const Edge& edge(int i) const { return edges_.at(i); }
    const std::vector<Edge>& edges() const { return edges_; }

    std::optional<int> find_vertex(const std::string& id) const;
    std::optional<int> find_edge(const std::string& id) const;
    int require_vertex(const std::string& id) const;

    // Edge indices in ascending order.
    const std::vector<int>& out_edges(int v) const { return out_.at(v); }
    const std::vector<int>& in_edges(int v) const { return in_.at(v); }

    int out_degree(int v) const { return static_cast<int>(out_.at(v).size()); }
    int in_degree(int v) const { return static_cast<int>(in_.at(v).size()); }

private:
    std::vector<std::string> vertex_ids_;
    std::unordered_map<std::string, int> vertex_index_;
    std::vector<Edge> edges_;
    std::unordered_map<std::string, int> edge_index_;
    std::vector<std::vector<int>> out_, in_;
    std::unordered_map<std::int64_t, int> quotient_by_pair_;
};

// Alternating vertex/edge sequence; vertices has one more entry than edges.
// The empty walk is a single vertex and no edges.
struct Walk {
    std::vector<int> vertices;
    std::vector<int> edges;

    bool empty_walk() const { return edges.empty(); }
    bool closed() const {
        return !vertices.empty() && vertices.front() == vertices.back();
    }
    bool operator==(const Walk& o) const {
        return vertices == o.vertices && edges == o.edges;
    }
};

// Bipartition cut; sides are vertex index sets, forward counts edges
// side1 -> side2, backward the reverse.  A Quotient edge counts once.
struct Cut {
    std::vector<int> side1, side2;
    std::int64_t forward = 0;
    std::int64_t backward = 0;

    bool balanced() const { return forward == backward; }
};

} // namespace endspace

#endif
