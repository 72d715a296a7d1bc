#include "endspace/json_out.hpp"

namespace endspace {

namespace {

Json json_card(const Card& c) {
    if (c.infinite) return "inf";
    return c.value;
}

Json json_uset(const USet& u) { return u.display(); }

} // namespace

Json json_level(const QuotientLevel& lv) {
    Json j;
    j["n"] = lv.index;
    Json classes = Json::array();
    for (const LevelClass& c : lv.classes) {
        Json jc;
        jc["id"] = c.id;
        jc["singleton"] = c.singleton;
        if (c.singleton) jc["vertex"] = c.vertex;
        jc["rep"] = c.rep_index;
        jc["size"] = json_card(c.size);
        classes.push_back(std::move(jc));
    }
    j["classes"] = std::move(classes);
    Json edges = Json::array();
    for (const Edge& e : lv.graph.edges()) {
        Json je;
        je["id"] = e.id;
        je["tail"] = lv.graph.vertex_id(e.tail);
        je["head"] = lv.graph.vertex_id(e.head);
        je["kind"] = e.kind == EdgeKind::Quotient ? "quotient" : "concrete";
        edges.push_back(std::move(je));
    }
    j["edges"] = std::move(edges);
    j["class_of"] = lv.class_of;
    j["certainty"] = to_string(lv.certainty);
    return j;
}

Json json_bonding(const BondingMap& b) {
    Json j;
    j["from"] = b.from_level;
    j["to"] = b.to_level;
    j["vertex_map"] = b.vertex_map;
    Json edges = Json::array();
    for (const EdgeImage& img : b.edge_map) {
        Json je;
        je["collapsed"] = img.collapsed;
        je[img.collapsed ? "class" : "id"] = img.id;
        edges.push_back(std::move(je));
    }
    j["edge_map"] = std::move(edges);
    return j;
}

Json json_walk(const MultiDigraph& g, const Walk& w) {
    Json a = Json::array();
    if (w.vertices.empty()) return a;
    a.push_back(g.vertex_id(w.vertices.front()));
    for (std::size_t i = 0; i < w.edges.size(); ++i) {
        a.push_back(g.edge(w.edges[i]).id);
        a.push_back(g.vertex_id(w.vertices[i + 1]));
    }
    return a;
}

Json json_info(const Source& s, std::size_t sample) {
    Json j;
    j["kind"] = s.kind();
    const auto total = s.vertex_count();
    if (total)
        j["vertex_count"] = *total;
    else
        j["vertex_count"] = "inf";
    Json verts = Json::array();
    const std::size_t n = s.clamp(sample);
    Certainty cert = Certainty::Exact;
    for (std::size_t i = 0; i < n; ++i) {
        const DegreeAnswer d = s.degrees(i);
        cert = weakest(cert, d.certainty);
        Json jv;
        jv["id"] = s.vertex(i);
        jv["in"] = json_card(d.in);
        jv["out"] = json_card(d.out);
        verts.push_back(std::move(jv));
    }
    j["vertices"] = std::move(verts);
    j["named_sets"] = s.named_sets();
    j["certainty"] = to_string(cert);
    return j;
}

namespace {

Json json_end_thread(const EndThread& t) {
    Json j;
    j["classes"] = t.classes;
    j["certainty"] = to_string(t.certainty);
    return j;
}

Json json_limit_endpoint(bool is_vertex, const std::string& vertex,
                         std::size_t end) {
    Json j;
    if (is_vertex) {
        j["kind"] = "vertex";
        j["id"] = vertex;
    } else {
        j["kind"] = "end";
        j["index"] = end;
    }
    return j;
}

Json json_limit_thread(const LimitEdgeThread& t) {
    Json j;
    j["tail"] = json_limit_endpoint(t.tail_is_vertex, t.tail_vertex, t.tail_end);
    j["head"] = json_limit_endpoint(t.head_is_vertex, t.head_vertex, t.head_end);
    Json levels = Json::array();
    for (const EdgeLevelRef& r : t.levels) {
        Json jl;
        jl["separated"] = r.separated;
        jl["from"] = r.from;
        jl["to"] = r.to;
        levels.push_back(std::move(jl));
    }
    j["levels"] = std::move(levels);
    j["certainty"] = to_string(t.certainty);
    return j;
}

} // namespace

Json json_end_space(const EndSpace& es) {
    Json j;
    j["ends"] = es.ends.size();
    j["limit_edges"] = es.limit_edges.size();
    j["depth"] = es.depth;
    Json threads = Json::array();
    for (const EndThread& t : es.ends) threads.push_back(json_end_thread(t));
    j["threads"] = std::move(threads);
    j["certainty"] = to_string(es.certainty);
    return j;
}

Json json_limit_edges(const EndSpace& es) {
    Json j;
    j["count"] = es.limit_edges.size();
    Json threads = Json::array();
    for (const LimitEdgeThread& t : es.limit_edges)
        threads.push_back(json_limit_thread(t));
    j["threads"] = std::move(threads);
    j["certainty"] = to_string(es.certainty);
    return j;
}

Json json_basic_open(const BasicOpen& bo) {
    Json j;
    j["level"] = bo.level;
    j["class"] = bo.class_id;
    j["ends_inside"] = bo.ends_inside;
    j["limit_edges_inside"] = bo.limit_edges_inside;
    j["boundary_edges"] = bo.boundary_edges;
    j["certainty"] = to_string(bo.certainty);
    return j;
}

Json json_necklace(const NecklacePrefix& p, const NecklaceVerdict& v) {
    Json j;
    j["found"] = true;
    j["beads"] = p.beads;
    j["forward"] = p.forward;
    j["backward"] = p.backward;
    Json sets = Json::array();
    for (const USet& u : p.sets) sets.push_back(json_uset(u));
    j["sets"] = std::move(sets);
    j["attachment"] = p.attachment;
    j["depth"] = p.depth;
    j["verified"] = v.ok;
    if (!v.ok) j["violation"] = v.violation;
    j["certainty"] = to_string(p.certainty);
    return j;
}

Json json_rank(const RankResult& r) {
    Json j;
    j["has_rank"] = r.has_rank;
    if (r.has_rank) j["rank"] = r.rank;
    j["r_max"] = r.r_max;
    if (r.finite_u)
        j["finite_u"] = *r.finite_u;
    else
        j["finite_u"] = nullptr;
    j["witnesses"] = r.witnesses;
    j["certainty"] = to_string(r.certainty);
    return j;
}

Json json_euler_verdict(const EulerVerdict& v) {
    Json j;
    if (v.ok) {
        j["verdict"] = "ok";
    } else {
        j["verdict"] = "witness";
        Json w;
        if (v.infinite_degree) {
            w["type"] = "infinite_degree";
            w["vertex"] = v.vertex;
        } else {
            w["type"] = "unbalanced_cut";
            w["forward"] = v.forward;
            w["backward"] = v.backward;
        }
        j["witness"] = std::move(w);
    }
    j["certainty"] = to_string(v.certainty);
    return j;
}

namespace {

Json json_thread_levels(const std::vector<QuotientLevel>& levels,
                        const std::vector<Walk>& walks, std::size_t first,
                        bool certified) {
    Json a = Json::array();
    for (std::size_t i = 0; i < walks.size(); ++i) {
        Json j;
        j["n"] = first + i;
        j["walk"] = json_walk(levels[i].graph, walks[i]);
        j["certificate"] = certified;
        a.push_back(std::move(j));
    }
    return a;
}

} // namespace

Json json_tour_thread(const std::vector<QuotientLevel>& levels,
                      const TourThread& t, const ThreadVerdict& v) {
    Json j;
    j["kind"] = "euler-tour";
    j["anchor"] = t.anchor;
    j["complete"] = t.complete;
    j["levels"] = json_thread_levels(levels, t.walks, 0, v.ok);
    if (!v.ok) j["violation"] = v.violation;
    j["certainty"] = to_string(t.certainty);
    return j;
}

Json json_walk_thread(const std::vector<QuotientLevel>& levels,
                      const WalkThread& t, const ThreadVerdict& v) {
    Json j;
    j["kind"] = "span-walk";
    j["levels"] = json_thread_levels(levels, t.walks, 1, v.ok);
    if (!v.ok) j["violation"] = v.violation;
    j["certainty"] = to_string(t.certainty);
    return j;
}

Json json_system(const SystemReport& r) {
    Json j;
    j["ok"] = r.ok;
    j["levels"] = r.levels;
    if (!r.ok) j["violation"] = r.violation;
    j["certainty"] = to_string(r.certainty);
    return j;
}

} // namespace endspace
