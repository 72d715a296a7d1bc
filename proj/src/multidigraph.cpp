#include "endspace/multidigraph.hpp"

namespace endspace {

int MultiDigraph::add_vertex(const std::string& id) {
    if (vertex_index_.count(id))
        throw Error(Err::DuplicateId, "duplicate vertex id: " + id);
    int idx = static_cast<int>(vertex_ids_.size());
    vertex_ids_.push_back(id);
    vertex_index_.emplace(id, idx);
    out_.emplace_back();
    in_.emplace_back();
    return idx;
}

int MultiDigraph::add_edge(const std::string& id, const std::string& tail,
                           const std::string& head, EdgeKind kind,
                           const std::string& origin) {
    return add_edge_by_index(id, require_vertex(tail), require_vertex(head),
                             kind, origin);
}

int MultiDigraph::add_edge_by_index(const std::string& id, int tail, int head,
                                    EdgeKind kind, const std::string& origin) {
    if (tail < 0 || tail >= vertex_count() || head < 0 || head >= vertex_count())
        throw Error(Err::UnknownVertex, "edge endpoint out of range");
    if (tail == head)
        throw Error(Err::LoopForbidden,
                    "loop at " + vertex_ids_[tail] + " rejected");
    if (edge_index_.count(id))
        throw Error(Err::DuplicateId, "duplicate edge id: " + id);
    if (kind == EdgeKind::Quotient) {
        std::int64_t key = (static_cast<std::int64_t>(tail) << 32) |
                           static_cast<std::uint32_t>(head);
        if (!quotient_by_pair_.emplace(key, static_cast<int>(edges_.size())).second)
            throw Error(Err::DuplicateQuotientEdge,
                        "second quotient edge " + vertex_ids_[tail] + " -> " +
                            vertex_ids_[head]);
    }
    int idx = static_cast<int>(edges_.size());
    edges_.push_back(Edge{id, tail, head, kind, origin});
    edge_index_.emplace(id, idx);
    out_[tail].push_back(idx);
    in_[head].push_back(idx);
    return idx;
}

std::optional<int> MultiDigraph::find_vertex(const std::string& id) const {
    auto it = vertex_index_.find(id);
    if (it == vertex_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<int> MultiDigraph::find_edge(const std::string& id) const {
    auto it = edge_index_.find(id);
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
}

int MultiDigraph::require_vertex(const std::string& id) const {
    auto v = find_vertex(id);
    if (!v) throw Error(Err::UnknownVertex, "unknown vertex: " + id);
    return *v;
}

} // namespace endspace
