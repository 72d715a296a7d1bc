#include <chrono>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "endspace/core.hpp"
#include "endspace/ends.hpp"
#include "endspace/parallel.hpp"
#include "endspace/quotient.hpp"
#include "endspace/source.hpp"
#include "endspace/tours.hpp"

using namespace endspace;

namespace {

struct Result {
    bool ok = true;
    std::string note;

    void fail(const std::string& why) {
        if (ok) {
            ok = false;
            note = why;
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

std::string fmt_secs(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1fs", s);
    return buf;
}

// ---- 1. finite sweep ------------------------------------------------------
// Every digraph on four vertices, one bit per ordered pair.  The tour finder
// must agree with two independently computed characterisations: balanced
// degrees plus connectivity of the non-isolated underlying graph, and
// balanced proper bipartition cuts plus the same connectivity.

Result criterion1() {
    Result res;
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::pair<int, int>> slots;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) slots.emplace_back(i, j);

    int tours = 0;
    for (unsigned mask = 0; mask < 4096 && res.ok; ++mask) {
        MultiDigraph g;
        for (int v = 0; v < 4; ++v) g.add_vertex(std::string(1, char('a' + v)));
        int din[4] = {0, 0, 0, 0}, dout[4] = {0, 0, 0, 0};
        for (int p = 0; p < 12; ++p)
            if (mask >> p & 1u) {
                g.add_edge_by_index("e" + std::to_string(p), slots[p].first,
                                    slots[p].second);
                ++dout[slots[p].first];
                ++din[slots[p].second];
            }

        bool degrees = true;
        for (int v = 0; v < 4; ++v) degrees = degrees && din[v] == dout[v];

        // Union-find over the underlying edges; isolated vertices do not
        // count against connectivity.
        int root[4] = {0, 1, 2, 3};
        auto find = [&](int v) {
            while (root[v] != v) v = root[v] = root[root[v]];
            return v;
        };
        for (int p = 0; p < 12; ++p)
            if (mask >> p & 1u) root[find(slots[p].first)] = find(slots[p].second);
        int lead = -1;
        bool connected = true;
        for (int v = 0; v < 4; ++v) {
            if (din[v] + dout[v] == 0) continue;
            if (lead < 0) lead = find(v);
            connected = connected && find(v) == lead;
        }

        bool cuts = true;
        for (unsigned side = 1; side <= 14 && cuts; ++side) {
            int fwd = 0, bwd = 0;
            for (int p = 0; p < 12; ++p)
                if (mask >> p & 1u) {
                    const bool ti = side >> slots[p].first & 1u;
                    const bool hi = side >> slots[p].second & 1u;
                    fwd += ti && !hi;
                    bwd += !ti && hi;
                }
            cuts = fwd == bwd;
        }

        // For a finite digraph the cut condition and the degree condition
        // coincide; the sweep checks that bridge too.
        if (cuts != degrees)
            res.fail("cut/degree disagreement at mask " + std::to_string(mask));

        const auto tour = find_euler_tour(g);
        const bool a = tour.has_value();
        const bool b = degrees && connected;
        const bool c = cuts && connected;
        if (a != b || a != c)
            res.fail("mismatch at mask " + std::to_string(mask));
        if (a) {
            ++tours;
            if (!is_valid_walk(g, *tour, {true, false, true}))
                res.fail("invalid tour at mask " + std::to_string(mask));
        }
    }
    const double secs = seconds_since(t0);
    if (secs >= 60.0) res.fail("sweep took " + fmt_secs(secs));
    if (res.ok)
        res.note = "4096 digraphs, " + std::to_string(tours) + " tours, " +
                   fmt_secs(secs);
    return res;
}

// ---- 2. unbalanced chain --------------------------------------------------

Result criterion2() {
    Result res;
    const SourcePtr s = make_builtin("zchain");
    const EulerVerdict v = check_euler(*s, 20);
    if (v.ok || v.infinite_degree) res.fail("expected an unbalanced cut");
    if (v.forward != 1 || v.backward != 0)
        res.fail("cut sizes " + std::to_string(v.forward) + "/" +
                 std::to_string(v.backward));
    if (v.certainty != Certainty::Exact) res.fail("not exact");
    for (std::size_t i = 0; i < 20 && res.ok; ++i) {
        const DegreeAnswer d = s->degrees(i);
        if (!(d.in == Card::fin(1)) || !(d.out == Card::fin(1)))
            res.fail("degree of " + s->vertex(i) + " not (1,1)");
    }
    if (res.ok) res.note = "forward 1, backward 0, degrees all (1,1)";
    return res;
}

// ---- 3. inverse-system laws -----------------------------------------------

std::optional<EdgeImage> compose_edge(const QuotientLevel& mid,
                                      const EdgeImage& first,
                                      const BondingMap& then) {
    if (first.collapsed) {
        const auto c = mid.find_class(first.id);
        if (!c) return std::nullopt;
        return EdgeImage{true, then.vertex_map[*c]};
    }
    const auto e = mid.graph.find_edge(first.id);
    if (!e) return std::nullopt;
    return then.edge_map[static_cast<std::size_t>(*e)];
}

Result criterion3() {
    Result res;
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<std::string> names = {"symmetric-ray", "twin-rays",
                                            "dominated-ray", "necklace"};
    for (const std::string& name : names) {
        const SourcePtr s = make_builtin(name);
        const auto levels = compute_levels(*s, 12, ExecMode::Serial);
        const std::size_t top = levels.size() - 1;
        std::vector<std::vector<BondingMap>> maps(top + 1);
        for (std::size_t n = 0; n <= top; ++n) {
            maps[n].reserve(n + 1);
            for (std::size_t m = 0; m <= n; ++m)
                maps[n].push_back(bonding(*s, levels[n], levels[m]));
        }
        for (std::size_t n = 0; n <= top && res.ok; ++n) {
            // Identity.
            const BondingMap& id = maps[n][n];
            for (std::size_t i = 0; i < levels[n].classes.size(); ++i)
                if (id.vertex_map[i] != levels[n].classes[i].id)
                    res.fail(name + ": identity broken at level " +
                             std::to_string(n));
            for (int e = 0; e < levels[n].graph.edge_count(); ++e)
                if (!(id.edge_map[static_cast<std::size_t>(e)] ==
                      EdgeImage{false, levels[n].graph.edge(e).id}))
                    res.fail(name + ": identity drops edge at level " +
                             std::to_string(n));
            for (std::size_t m = 0; m <= n && res.ok; ++m) {
                // Surjectivity of level n onto level m.
                const BondingMap& f = maps[n][m];
                for (const LevelClass& c : levels[m].classes) {
                    bool hit = false;
                    for (const std::string& img : f.vertex_map)
                        hit = hit || img == c.id;
                    if (!hit)
                        res.fail(name + ": class " + c.id + " of level " +
                                 std::to_string(m) + " not hit from level " +
                                 std::to_string(n));
                }
                for (int e = 0; e < levels[m].graph.edge_count(); ++e) {
                    const std::string& eid = levels[m].graph.edge(e).id;
                    bool hit = false;
                    for (const EdgeImage& img : f.edge_map)
                        hit = hit || (!img.collapsed && img.id == eid);
                    if (!hit)
                        res.fail(name + ": edge " + eid + " of level " +
                                 std::to_string(m) + " not hit from level " +
                                 std::to_string(n));
                }
                // Composition through every middle level.
                for (std::size_t j = m; j <= n && res.ok; ++j) {
                    const BondingMap& up = maps[n][j];
                    const BondingMap& down = maps[j][m];
                    for (std::size_t i = 0; i < up.vertex_map.size(); ++i) {
                        const auto c = levels[j].find_class(up.vertex_map[i]);
                        if (!c || down.vertex_map[*c] != f.vertex_map[i])
                            res.fail(name + ": vertex composition " +
                                     std::to_string(n) + ">" +
                                     std::to_string(j) + ">" +
                                     std::to_string(m));
                    }
                    for (std::size_t e = 0; e < up.edge_map.size(); ++e) {
                        const auto img =
                            compose_edge(levels[j], up.edge_map[e], down);
                        if (!img || !(*img == f.edge_map[e]))
                            res.fail(name + ": edge composition " +
                                     std::to_string(n) + ">" +
                                     std::to_string(j) + ">" +
                                     std::to_string(m));
                    }
                }
            }
        }
        const SystemReport rep = verify_system(*s, 12);
        if (!rep.ok) res.fail(name + ": " + rep.violation);
    }
    const double secs = seconds_since(t0);
    if (secs >= 30.0) res.fail("laws took " + fmt_secs(secs));
    if (res.ok)
        res.note = "4 sources, levels 0..12, all triples, " + fmt_secs(secs);
    return res;
}

// ---- 4. tour threads ------------------------------------------------------

Result criterion4() {
    Result res;
    for (const std::string name : {"symmetric-ray", "necklace"}) {
        const SourcePtr s = make_builtin(name);
        const TourThread t = lift_euler(*s, 12, "C0");
        if (!t.complete) res.fail(name + ": thread incomplete");
        if (t.walks.size() != 13)
            res.fail(name + ": " + std::to_string(t.walks.size()) + " walks");
        const ThreadVerdict v = verify_thread(*s, t);
        if (!v.ok) res.fail(name + ": " + v.violation);
    }
    if (res.ok) res.note = "complete threads of 13 tours, certificates hold";
    return res;
}

// ---- 5. spanning-walk threads ---------------------------------------------

Result criterion5() {
    Result res;
    for (const std::string name : {"symmetric-ray", "necklace"}) {
        const SourcePtr s = make_builtin(name);
        const WalkThread t = span_walk(*s, 10);
        if (t.walks.size() != 10) {
            res.fail(name + ": " + std::to_string(t.walks.size()) + " walks");
            continue;
        }
        const auto levels = compute_levels(*s, 10, ExecMode::Serial);
        for (std::size_t n = 1; n <= 10 && res.ok; ++n) {
            const Walk& w = t.walks[n - 1];
            if (!is_valid_walk(levels[n].graph, w, {true, true, false}))
                res.fail(name + ": walk " + std::to_string(n) +
                         " not closed spanning");
            if (n >= 2) {
                const BondingMap b = bonding(*s, levels[n], levels[n - 1]);
                if (!(project_walk(levels[n], levels[n - 1], b, w) ==
                      t.walks[n - 2]))
                    res.fail(name + ": projection differs at level " +
                             std::to_string(n));
            }
        }
        const ThreadVerdict v = verify_thread(*s, t);
        if (!v.ok) res.fail(name + ": " + v.violation);
    }
    const SourcePtr twin = make_builtin("twin-rays");
    try {
        span_walk(*twin, 10);
        res.fail("twin-rays: expected a strong-connectivity failure");
    } catch (const NotStronglyConnectedError& e) {
        if (e.from().empty() || e.to().empty() || e.from() == e.to())
            res.fail("twin-rays: witness pair not concrete");
        if (e.from() != "b0" || e.to() != "a0")
            res.fail("twin-rays: witness pair " + e.from() + "/" + e.to());
    }
    if (res.ok) res.note = "10 levels projected verbatim, witness pair b0/a0";
    return res;
}

// ---- 6. necklace / rank dichotomy -----------------------------------------

Result criterion6() {
    Result res;
    struct Instance {
        std::string name;
        USet u;
        bool necklace_side;
        std::string center;
    };
    const std::vector<Instance> table = {
        {"ray", USet::all(), false, "v0"},
        {"outstar", USet::all(), false, "z"},
        {"symmetric-ray", USet::all(), true, ""},
        {"necklace", USet::all(), true, ""},
        {"twin-rays", USet::named("A"), true, ""},
        {"twin-rays", USet::named("B"), true, ""},
    };
    for (const Instance& inst : table) {
        const std::string label = inst.name + "/" + inst.u.display();
        const SourcePtr s = make_builtin(inst.name);
        const std::vector<USet> us = {inst.u};
        const auto prefix = necklace_search(*s, us, 5, 48);
        const RankResult rank = rank_search(*s, us, 3, 3, 12);
        if (prefix.has_value() == rank.has_rank)
            res.fail(label + ": dichotomy branches not exclusive");
        if (inst.necklace_side) {
            if (!prefix) {
                res.fail(label + ": no necklace prefix");
                continue;
            }
            if (prefix->beads.size() < 5)
                res.fail(label + ": only " +
                         std::to_string(prefix->beads.size()) + " beads");
            const NecklaceVerdict v = verify_necklace(*s, *prefix, 48);
            if (!v.ok) res.fail(label + ": " + v.violation);
            if (rank.has_rank) res.fail(label + ": unexpected rank");
        } else {
            if (!rank.has_rank || rank.rank != 1) {
                res.fail(label + ": expected rank 1");
                continue;
            }
            bool named = false;
            for (const std::string& w : rank.witnesses)
                named = named || w.find("X={" + inst.center + "}") !=
                                     std::string::npos;
            if (!named)
                res.fail(label + ": witness does not name " + inst.center);
            if (prefix) res.fail(label + ": unexpected necklace");
            if (necklace_search(*s, us, 2, 24))
                res.fail(label + ": short necklace exists");
        }
    }
    if (res.ok) res.note = "2 ranked, 4 necklaces of 5 beads, branches exclusive";
    return res;
}

// ---- 7. solidity ----------------------------------------------------------

Result criterion7() {
    Result res;
    const SourcePtr star = make_builtin("outstar");
    const auto center = star->find_vertex_index("z", 4);
    if (!center) {
        res.fail("outstar: no center vertex");
        return res;
    }
    if (solidity_check(*star, {*center}, 24).solid)
        res.fail("outstar: solid at its center");

    // The remaining builtins whose strong components stay finite in number
    // after removing any finite set.
    const std::vector<std::string> solid = {"symmetric-ray", "twin-rays",
                                            "dominated-ray", "necklace"};
    for (const std::string& name : solid) {
        const SourcePtr s = make_builtin(name);
        for (std::size_t i = 0; i < 12 && res.ok; ++i)
            if (!solidity_check(*s, {i}, 24).solid)
                res.fail(name + ": not solid at {" + s->vertex(i) + "}");
        for (std::size_t n = 1; n <= 12 && res.ok; ++n)
            if (!solidity_check(*s, prefix_vset(n), 24).solid)
                res.fail(name + ": not solid at prefix of " +
                         std::to_string(n));
    }

    // One-directional chains decompose into infinitely many singleton
    // strong components; the oracle must not paper over that.
    for (const std::string& name : {std::string("ray"),
                                    std::string("reverse-ray"),
                                    std::string("zchain")}) {
        const SourcePtr s = make_builtin(name);
        if (solidity_check(*s, {}, 24).solid)
            res.fail(name + ": reported solid");
        if (solidity_check(*s, {0}, 24).solid)
            res.fail(name + ": reported solid at first vertex");
    }
    if (res.ok)
        res.note = "non-solid center, 96 solid samples, chains flagged";
    return res;
}

// ---- 8. stable counts -----------------------------------------------------

Result criterion8() {
    Result res;
    for (std::size_t d = 4; d <= 12 && res.ok; ++d) {
        const auto sym = end_space(*make_builtin("symmetric-ray"), d);
        if (sym.ends.size() != 1 || !sym.limit_edges.empty())
            res.fail("symmetric-ray at depth " + std::to_string(d));

        const auto twin = end_space(*make_builtin("twin-rays"), d);
        if (twin.ends.size() != 2 || twin.limit_edges.size() != 1) {
            res.fail("twin-rays at depth " + std::to_string(d));
            continue;
        }
        const LimitEdgeThread& ee = twin.limit_edges[0];
        if (ee.tail_is_vertex || ee.head_is_vertex)
            res.fail("twin-rays: limit edge not end-to-end");

        const auto dom = end_space(*make_builtin("dominated-ray"), d);
        if (dom.ends.size() != 1 || dom.limit_edges.size() != 1) {
            res.fail("dominated-ray at depth " + std::to_string(d));
            continue;
        }
        const LimitEdgeThread& ve = dom.limit_edges[0];
        if (!ve.tail_is_vertex || ve.tail_vertex != "w" || ve.head_is_vertex)
            res.fail("dominated-ray: limit edge not vertex-to-end");
    }
    if (res.ok) res.note = "counts 1/0, 2/1, 1/1 at depths 4..12";
    return res;
}

// ---- 9. determinism -------------------------------------------------------

struct CliRun {
    int code = -1;
    std::string text;
};

CliRun run_cli(const std::string& args) {
    const std::string cmd =
        std::string(ENDSPACE_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    CliRun out;
    if (!p) return out;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.text.append(buf, n);
    const int st = pclose(p);
    out.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return out;
}

Result criterion9() {
    Result res;
    const std::vector<std::string> cmds = {
        "check-euler --source builtin:zchain --depth 20 --format json",
        "verify --source builtin:symmetric-ray --depth 12 --format json",
        "verify --source builtin:twin-rays --depth 12 --format json",
        "verify --source builtin:dominated-ray --depth 12 --format json",
        "verify --source builtin:necklace --depth 12 --format json",
        "euler-tour --source builtin:symmetric-ray --depth 12 --format json",
        "euler-tour --source builtin:necklace --depth 12 --format json",
        "span-walk --source builtin:symmetric-ray --depth 10 --format json",
        "span-walk --source builtin:necklace --depth 10 --format json",
        "necklace --source builtin:symmetric-ray --beads 5 --depth 48 "
        "--format json",
        "necklace --source builtin:twin-rays --set A --beads 5 --depth 48 "
        "--format json",
        "rank --source builtin:ray --r-max 3 --depth 12 --format json",
        "rank --source builtin:outstar --r-max 3 --depth 12 --format json",
        "rank --source builtin:twin-rays --set B --r-max 3 --depth 12 "
        "--format json",
        "info --source builtin:outstar --depth 8 --format json",
        "ends --source builtin:symmetric-ray --depth 12 --format json",
        "ends --source builtin:twin-rays --depth 12 --format json",
        "limit-edges --source builtin:dominated-ray --depth 12 --format json",
    };
    for (const std::string& c : cmds) {
        const CliRun a = run_cli(c);
        const CliRun b = run_cli(c);
        if (a.code != 0) res.fail(c + ": exit " + std::to_string(a.code));
        if (a.code != b.code || a.text != b.text)
            res.fail(c + ": runs differ");
        if (a.text.empty()) res.fail(c + ": no output");
    }
    if (res.ok)
        res.note = std::to_string(cmds.size()) + " commands, repeated runs "
                   "byte-identical";
    return res;
}

} // namespace

int main() {
    int failures = 0;
    const std::vector<Result (*)()> criteria = {
        criterion1, criterion2, criterion3, criterion4, criterion5,
        criterion6, criterion7, criterion8, criterion9};
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Result r;
        try {
            r = criteria[i]();
        } catch (const std::exception& e) {
            r.fail(std::string("exception: ") + e.what());
        }
        std::string line = "criterion " + std::to_string(i + 1) + ": " +
                           (r.ok ? "pass" : "FAIL");
        if (!r.note.empty()) line += " (" + r.note + ")";
        std::puts(line.c_str());
        std::fflush(stdout);
        failures += r.ok ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
