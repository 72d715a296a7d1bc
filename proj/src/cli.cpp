#include "endspace/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "endspace/json_out.hpp"
#include "endspace/parallel.hpp"

namespace endspace {

namespace {

std::string card_text(const Card& c) {
    return c.infinite ? "inf" : std::to_string(c.value);
}

std::string walk_text(const MultiDigraph& g, const Walk& w) {
    std::string line = g.vertex_id(w.vertices.front());
    for (std::size_t i = 0; i < w.edges.size(); ++i) {
        line += " " + g.edge(w.edges[i]).id;
        line += " " + g.vertex_id(w.vertices[i + 1]);
    }
    return line;
}

std::string join(const std::vector<std::string>& items) {
    std::string line;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) line += " ";
        line += items[i];
    }
    return line;
}

std::string endpoint_text(bool is_vertex, const std::string& vertex,
                          std::size_t end) {
    return is_vertex ? "vertex " + vertex : "end " + std::to_string(end);
}

void write_dot_files(const std::vector<QuotientLevel>& levels,
                     const std::string& dir, std::ostream& out) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw Error(Err::BadParams, "cannot create DOT directory " + dir);
    for (const QuotientLevel& lv : levels) {
        const std::filesystem::path p =
            std::filesystem::path(dir) /
            ("level" + std::to_string(lv.index) + ".dot");
        std::ofstream f(p, std::ios::binary);
        if (!f) throw Error(Err::BadParams, "cannot write " + p.string());
        f << export_dot(lv);
    }
    out << "wrote " << levels.size() << " dot files to " << dir << "\n";
}

std::vector<USet> resolve_sets(const Source& s, const RunConfig& cfg) {
    std::vector<USet> us;
    if (cfg.set_specs.empty()) {
        us.push_back(USet::all());
        return us;
    }
    us.reserve(cfg.set_specs.size());
    for (const std::string& spec : cfg.set_specs)
        us.push_back(parse_uset(s, spec));
    return us;
}

int run_info(const Source& s, const RunConfig& cfg, std::ostream& out) {
    if (cfg.format == "json") {
        out << json_info(s, cfg.depth).dump() << "\n";
        return 0;
    }
    out << "kind: " << s.kind() << "\n";
    const auto total = s.vertex_count();
    out << "vertices: " << (total ? std::to_string(*total) : "inf") << "\n";
    const auto named = s.named_sets();
    out << "named sets: " << (named.empty() ? "(none)" : join(named)) << "\n";
    Certainty cert = Certainty::Exact;
    for (std::size_t i = 0; i < s.clamp(cfg.depth); ++i) {
        const DegreeAnswer d = s.degrees(i);
        cert = weakest(cert, d.certainty);
        out << s.vertex(i) << ": in " << card_text(d.in) << " out "
            << card_text(d.out) << "\n";
    }
    out << "certainty: " << to_string(cert) << "\n";
    return 0;
}

int run_quotients(const Source& s, const RunConfig& cfg, ExecMode mode,
                  std::ostream& out) {
    const auto levels = compute_levels(s, cfg.depth, mode);
    Certainty cert = Certainty::Exact;
    for (const QuotientLevel& lv : levels) cert = weakest(cert, lv.certainty);
    if (cfg.format == "json") {
        Json j;
        Json jl = Json::array();
        for (const QuotientLevel& lv : levels) jl.push_back(json_level(lv));
        j["levels"] = std::move(jl);
        Json jb = Json::array();
        for (std::size_t n = 1; n < levels.size(); ++n)
            jb.push_back(json_bonding(bonding(s, levels[n], levels[n - 1])));
        j["bondings"] = std::move(jb);
        j["certainty"] = to_string(cert);
        out << j.dump() << "\n";
    } else {
        for (const QuotientLevel& lv : levels) {
            out << "level " << lv.index << ": " << lv.classes.size()
                << (lv.classes.size() == 1 ? " class, " : " classes, ")
                << lv.graph.edge_count()
                << (lv.graph.edge_count() == 1 ? " edge\n" : " edges\n");
            for (const LevelClass& c : lv.classes)
                out << "  " << c.id << " size " << card_text(c.size) << "\n";
        }
        out << "certainty: " << to_string(cert) << "\n";
    }
    if (!cfg.dot_dir.empty()) write_dot_files(levels, cfg.dot_dir, out);
    return 0;
}

int run_ends(const Source& s, const RunConfig& cfg, std::ostream& out) {
    const EndSpace es = end_space(s, cfg.depth);
    if (cfg.format == "json") {
        out << json_end_space(es).dump() << "\n";
        return 0;
    }
    out << "ends: " << es.ends.size() << "\n";
    out << "limit edges: " << es.limit_edges.size() << "\n";
    for (std::size_t i = 0; i < es.ends.size(); ++i)
        out << "end " << i << ": " << join(es.ends[i].classes) << "\n";
    out << "certainty: " << to_string(es.certainty) << "\n";
    return 0;
}

int run_limit_edges(const Source& s, const RunConfig& cfg, std::ostream& out) {
    const EndSpace es = end_space(s, cfg.depth);
    if (cfg.format == "json") {
        out << json_limit_edges(es).dump() << "\n";
        return 0;
    }
    out << "limit edges: " << es.limit_edges.size() << "\n";
    for (std::size_t i = 0; i < es.limit_edges.size(); ++i) {
        const LimitEdgeThread& t = es.limit_edges[i];
        std::size_t separated = 0;
        for (const EdgeLevelRef& r : t.levels)
            if (r.separated) ++separated;
        out << i << ": "
            << endpoint_text(t.tail_is_vertex, t.tail_vertex, t.tail_end)
            << " -> "
            << endpoint_text(t.head_is_vertex, t.head_vertex, t.head_end)
            << ", separated at " << separated << "/" << t.levels.size()
            << " levels\n";
    }
    out << "certainty: " << to_string(es.certainty) << "\n";
    return 0;
}

int run_basic_open(const Source& s, const RunConfig& cfg, std::ostream& out) {
    const EndSpace es = end_space(s, cfg.depth);
    const BasicOpen bo = basic_open(es, cfg.end_index, cfg.open_level);
    if (cfg.format == "json") {
        out << json_basic_open(bo).dump() << "\n";
        return 0;
    }
    out << "level: " << bo.level << "\n";
    out << "class: " << bo.class_id << "\n";
    out << "ends inside:";
    for (std::size_t i : bo.ends_inside) out << " " << i;
    out << "\nlimit edges inside:";
    for (std::size_t i : bo.limit_edges_inside) out << " " << i;
    out << "\nboundary: " << join(bo.boundary_edges) << "\n";
    out << "certainty: " << to_string(bo.certainty) << "\n";
    return 0;
}

int run_necklace(const Source& s, const RunConfig& cfg, std::ostream& out) {
    const std::vector<USet> us = resolve_sets(s, cfg);
    const auto p = necklace_search(s, us, cfg.beads, cfg.depth);
    if (!p) {
        if (cfg.format == "json") {
            Json j;
            j["found"] = false;
            out << j.dump() << "\n";
        } else {
            out << "no necklace prefix found\n";
        }
        return 0;
    }
    const NecklaceVerdict v = verify_necklace(s, *p, cfg.depth);
    if (cfg.format == "json") {
        out << json_necklace(*p, v).dump() << "\n";
        return 0;
    }
    out << "found: " << p->beads.size() << " beads (depth " << p->depth
        << ")\n";
    for (std::size_t i = 0; i < p->beads.size(); ++i)
        out << "bead " << i << ": " << join(p->beads[i]) << "\n";
    out << "verified: " << (v.ok ? "yes" : "no: " + v.violation) << "\n";
    out << "certainty: " << to_string(p->certainty) << "\n";
    return 0;
}

int run_rank(const Source& s, const RunConfig& cfg, std::ostream& out) {
    const std::vector<USet> us = resolve_sets(s, cfg);
    const RankResult r =
        rank_search(s, us, cfg.r_max, cfg.sep_bound, cfg.depth);
    if (cfg.format == "json") {
        out << json_rank(r).dump() << "\n";
        return 0;
    }
    if (r.has_rank)
        out << "rank: " << r.rank << " (r_max " << r.r_max << ")\n";
    else
        out << "rank: none up to " << r.r_max << "\n";
    if (r.finite_u) out << "finite trace: " << *r.finite_u << "\n";
    for (const std::string& w : r.witnesses) out << w << "\n";
    out << "certainty: " << to_string(r.certainty) << "\n";
    return 0;
}

int run_check_euler(const Source& s, const RunConfig& cfg, std::ostream& out) {
    const EulerVerdict v = check_euler(s, cfg.depth);
    if (cfg.format == "json") {
        out << json_euler_verdict(v).dump() << "\n";
        return 0;
    }
    if (v.ok) {
        out << "ok\n";
    } else if (v.infinite_degree) {
        out << "witness: infinite degree at " << v.vertex << "\n";
    } else {
        out << "witness: unbalanced cut forward " << v.forward << " backward "
            << v.backward << "\n";
        out << "side1: " << join(v.side1) << "\n";
        out << "side2: " << join(v.side2) << "\n";
    }
    out << "certainty: " << to_string(v.certainty) << "\n";
    return 0;
}

int run_euler_tour(const Source& s, const RunConfig& cfg, ExecMode mode,
                   std::ostream& out) {
    const auto levels = compute_levels(s, cfg.depth, mode);
    const TourThread t = lift_euler(s, cfg.depth, cfg.anchor, cfg.tour_limit);
    const ThreadVerdict v = verify_thread(s, t);
    if (cfg.format == "json") {
        out << json_tour_thread(levels, t, v).dump() << "\n";
        return 0;
    }
    out << "anchor: " << t.anchor << "\n";
    out << "complete: " << (t.complete ? "yes" : "no") << "\n";
    for (std::size_t n = 0; n < t.walks.size(); ++n)
        out << "level " << n << ": " << walk_text(levels[n].graph, t.walks[n])
            << "\n";
    out << "verified: " << (v.ok ? "yes" : "no: " + v.violation) << "\n";
    out << "certainty: " << to_string(t.certainty) << "\n";
    return 0;
}

int run_span_walk(const Source& s, const RunConfig& cfg, ExecMode mode,
                  std::ostream& out) {
    const auto all = compute_levels(s, cfg.depth, mode);
    const WalkThread t = span_walk(s, cfg.depth);
    const std::vector<QuotientLevel> levels(all.begin() + 1, all.end());
    const ThreadVerdict v = verify_thread(s, t);
    if (cfg.format == "json") {
        out << json_walk_thread(levels, t, v).dump() << "\n";
        return 0;
    }
    for (std::size_t i = 0; i < t.walks.size(); ++i)
        out << "level " << i + 1 << ": "
            << walk_text(levels[i].graph, t.walks[i]) << "\n";
    out << "verified: " << (v.ok ? "yes" : "no: " + v.violation) << "\n";
    out << "certainty: " << to_string(t.certainty) << "\n";
    return 0;
}

int run_verify(const Source& s, const RunConfig& cfg, std::ostream& out) {
    const SystemReport r = verify_system(s, cfg.depth);
    if (cfg.format == "json") {
        out << json_system(r).dump() << "\n";
        return 0;
    }
    if (r.ok)
        out << "ok: " << r.levels << " levels\n";
    else
        out << "violation: " << r.violation << "\n";
    out << "certainty: " << to_string(r.certainty) << "\n";
    return 0;
}

int dispatch(const RunConfig& cfg, std::ostream& out) {
    const SourcePtr s = resolve_source_spec(cfg.source_spec);
    const ExecMode mode =
        cfg.parallel ? ExecMode::Parallel : ExecMode::Serial;
    if (cfg.command == "info") return run_info(*s, cfg, out);
    if (cfg.command == "quotients") return run_quotients(*s, cfg, mode, out);
    if (cfg.command == "ends") return run_ends(*s, cfg, out);
    if (cfg.command == "limit-edges") return run_limit_edges(*s, cfg, out);
    if (cfg.command == "basic-open") return run_basic_open(*s, cfg, out);
    if (cfg.command == "necklace") return run_necklace(*s, cfg, out);
    if (cfg.command == "rank") return run_rank(*s, cfg, out);
    if (cfg.command == "check-euler") return run_check_euler(*s, cfg, out);
    if (cfg.command == "euler-tour") return run_euler_tour(*s, cfg, mode, out);
    if (cfg.command == "span-walk") return run_span_walk(*s, cfg, mode, out);
    if (cfg.command == "verify") return run_verify(*s, cfg, out);
    throw InternalError("unrouted subcommand " + cfg.command);
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"end space analysis of infinite digraphs", "endspace"};
    app.require_subcommand(1);
    const std::vector<std::pair<std::string, std::string>> commands{
        {"info", "source kind, sample vertices and degrees"},
        {"quotients", "quotient levels, optionally as DOT files"},
        {"ends", "end threads to the requested depth"},
        {"limit-edges", "limit edge threads between ends and vertices"},
        {"basic-open", "basic open neighbourhood of one end"},
        {"necklace", "search for a necklace prefix through the given sets"},
        {"rank", "bounded rank search over the given sets"},
        {"check-euler", "degree and cut conditions for Euler tours"},
        {"euler-tour", "compatible Euler tours across all levels"},
        {"span-walk", "closed spanning walk recursion across levels"},
        {"verify", "inverse system laws up to the requested depth"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* c = app.add_subcommand(name, help);
        c->add_option("--source", cfg.source_spec,
                      "source file path or builtin:<name>[(k=v,...)]")
            ->required();
        c->add_option("--depth", cfg.depth, "level depth bound");
        c->add_option("--format", cfg.format, "text or json")
            ->check(CLI::IsMember({"text", "json"}));
        c->add_option("--dot", cfg.dot_dir, "directory for DOT export");
        c->add_option("--r-max", cfg.r_max, "rank search bound")
            ->check(CLI::PositiveNumber);
        c->add_option("--sep-bound", cfg.sep_bound, "separator size bound")
            ->check(CLI::PositiveNumber);
        c->add_option("--beads", cfg.beads, "necklace prefix length")
            ->check(CLI::PositiveNumber);
        c->add_option("--tour-limit", cfg.tour_limit,
                      "tour enumeration budget per level")
            ->check(CLI::PositiveNumber);
        c->add_option("--end", cfg.end_index, "end index for basic-open");
        c->add_option("--level", cfg.open_level, "level for basic-open");
        c->add_option("--anchor", cfg.anchor, "anchor class for euler-tour");
        c->add_option("--set", cfg.set_specs,
                      "watched vertex set: all, a named set, or v1,v2,...");
        c->add_flag("--parallel", cfg.parallel,
                    "parallel level construction (identical output)");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    try {
        return dispatch(cfg, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 4;
    }
}

} // namespace endspace
