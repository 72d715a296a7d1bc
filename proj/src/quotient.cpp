#include "endspace/quotient.hpp"

#include <algorithm>

namespace endspace {

namespace {

std::string join_ids(const std::vector<std::string>& ids) {
    std::string s;
    for (const auto& id : ids) {
        if (!s.empty()) s += ',';
        s += id;
    }
    return s;
}

std::string quotient_edge_id(const std::string& from, const std::string& to) {
    return "q:" + from + ">" + to;
}

} // namespace

NonSolidError::NonSolidError(SolidityReport r)
    : Error(Err::NonSolidAtLevel,
            "not solid at separator {" + join_ids(r.x_ids) +
                "}: component count " + to_string(r.count) + " (" +
                to_string(r.certainty) + ")"),
      report_(std::move(r)) {}

std::optional<std::size_t> QuotientLevel::find_class(const std::string& id) const {
    for (std::size_t i = 0; i < classes.size(); ++i)
        if (classes[i].id == id) return i;
    return std::nullopt;
}

std::vector<std::string> level_classes_of(const Source& s, std::size_t n,
                                          std::size_t window) {
    const std::size_t nn = s.clamp(n);
    const std::size_t w = s.clamp(window);
    std::vector<std::string> out;
    out.reserve(w);
    if (s.has_custom_chain()) {
        for (std::size_t i = 0; i < w; ++i)
            out.push_back(s.custom_class_of(nn, i));
        return out;
    }
    for (std::size_t i = 0; i < std::min(nn, w); ++i) out.push_back(s.vertex(i));
    if (w > nn) {
        const ComponentAnswer ans = s.components(prefix_vset(nn), w);
        if (ans.count.infinite)
            throw NonSolidError(solidity_check(s, prefix_vset(nn), w));
        for (std::size_t i = nn; i < w; ++i) {
            const auto lbl = ans.label_of(s.vertex(i));
            if (!lbl)
                throw InternalError("component oracle lost vertex " + s.vertex(i));
            out.push_back(*lbl);
        }
    }
    return out;
}

std::string level_class_of(const Source& s, std::size_t n, std::size_t idx) {
    if (s.has_custom_chain()) return s.custom_class_of(s.clamp(n), idx);
    return level_classes_of(s, n, idx + 1).back();
}

namespace {

QuotientLevel level_from_custom(const Source& s, std::size_t n) {
    const CustomLevel spec = s.custom_level(n);
    QuotientLevel lv;
    lv.index = n;
    lv.certainty = spec.certainty;
    for (std::size_t i = 0; i < n; ++i) lv.x_ids.push_back(s.vertex(i));
    for (const ClassSpec& c : spec.classes) {
        lv.classes.push_back(LevelClass{c.id, c.singleton, c.vertex,
                                        c.rep_index, c.size});
        lv.graph.add_vertex(c.id);
    }
    for (const BundleSpec& b : spec.bundles) {
        if (b.from == b.to)
            throw InternalError("bundle inside one class at level " +
                                std::to_string(n));
        if (b.infinite) {
            lv.graph.add_edge(quotient_edge_id(b.from, b.to), b.from, b.to,
                              EdgeKind::Quotient);
        } else {
            for (const SourceEdgeRef& e : b.edges)
                lv.graph.add_edge(e.id, b.from, b.to, EdgeKind::Concrete, e.id);
        }
    }
    std::size_t window = 0;
    for (const LevelClass& c : lv.classes)
        window = std::max(window, c.rep_index + 1);
    for (std::size_t i = 0; i < window; ++i)
        lv.class_of.push_back(s.custom_class_of(n, i));
    return lv;
}

} // namespace

QuotientLevel level(const Source& s, std::size_t n) {
    const std::size_t nn = s.clamp(n);
    if (s.has_custom_chain()) return level_from_custom(s, nn);

    const VSet x = prefix_vset(nn);
    const ComponentAnswer ans = s.components(x, nn);
    if (ans.count.infinite) throw NonSolidError(solidity_check(s, x, nn));

    QuotientLevel lv;
    lv.index = nn;
    lv.certainty = ans.certainty;
    for (std::size_t i = 0; i < nn; ++i) {
        const std::string id = s.vertex(i);
        lv.x_ids.push_back(id);
        lv.classes.push_back(LevelClass{id, true, id, i, Card::fin(1)});
    }
    for (const ComponentInfo& c : ans.components)
        lv.classes.push_back(LevelClass{c.id, false, "", c.rep_index, c.size});
    for (const LevelClass& c : lv.classes) lv.graph.add_vertex(c.id);

    // Concrete edges among the singletons are the truncation itself, in the
    // source's own edge order.
    const MultiDigraph trunc = s.truncation(nn);
    for (const Edge& e : trunc.edges())
        lv.graph.add_edge(e.id, trunc.vertex_id(e.tail), trunc.vertex_id(e.head),
                          EdgeKind::Concrete, e.id);

    // Bundles touching a component class come from the oracle; pairs in
    // class order, each bundle's edges in oracle order, quotient edges last.
    struct QuotientPending {
        std::string from, to;
    };
    std::vector<QuotientPending> quotients;
    Certainty cert = ans.certainty;
    for (std::size_t ai = 0; ai < lv.classes.size(); ++ai) {
        for (std::size_t bi = 0; bi < lv.classes.size(); ++bi) {
            if (ai == bi) continue;
            if (lv.classes[ai].singleton && lv.classes[bi].singleton) continue;
            const BundleAnswer bun =
                s.bundle(x, lv.classes[ai].id, lv.classes[bi].id);
            cert = weakest(cert, bun.certainty);
            if (bun.infinite) {
                quotients.push_back(
                    QuotientPending{lv.classes[ai].id, lv.classes[bi].id});
            } else {
                for (const SourceEdgeRef& e : bun.edges)
                    lv.graph.add_edge(e.id, lv.classes[ai].id,
                                      lv.classes[bi].id, EdgeKind::Concrete,
                                      e.id);
            }
        }
    }
    for (const QuotientPending& q : quotients)
        lv.graph.add_edge(quotient_edge_id(q.from, q.to), q.from, q.to,
                          EdgeKind::Quotient);
    lv.certainty = cert;

    std::size_t window = 0;
    for (const LevelClass& c : lv.classes)
        window = std::max(window, c.rep_index + 1);
    lv.class_of = level_classes_of(s, nn, window);
    return lv;
}

BondingMap bonding(const Source& s, const QuotientLevel& from,
                   const QuotientLevel& to) {
    if (to.index > from.index)
        throw Error(Err::LevelMismatch,
                    "bonding requires to-level <= from-level");
    BondingMap map;
    map.from_level = from.index;
    map.to_level = to.index;

    // Every class of the finer level sits inside a unique coarser class;
    // the class of any one member finds it.
    std::size_t window = 0;
    for (const LevelClass& c : from.classes)
        window = std::max(window, c.rep_index + 1);
    const std::vector<std::string> coarse = level_classes_of(s, to.index, window);
    for (const LevelClass& c : from.classes)
        map.vertex_map.push_back(coarse.at(c.rep_index));

    for (const Edge& e : from.graph.edges()) {
        const std::string& p = map.vertex_map[static_cast<std::size_t>(e.tail)];
        const std::string& q = map.vertex_map[static_cast<std::size_t>(e.head)];
        if (p == q) {
            map.edge_map.push_back(EdgeImage{true, p});
            continue;
        }
        const auto qe = to.graph.find_edge(quotient_edge_id(p, q));
        if (qe && to.graph.edge(*qe).kind == EdgeKind::Quotient) {
            map.edge_map.push_back(EdgeImage{false, to.graph.edge(*qe).id});
            continue;
        }
        if (e.kind == EdgeKind::Quotient)
            throw InternalError("infinite bundle " + e.id +
                                " lost between levels " +
                                std::to_string(from.index) + " and " +
                                std::to_string(to.index));
        if (!to.graph.find_edge(e.id))
            throw InternalError("edge " + e.id + " has no image at level " +
                                std::to_string(to.index));
        map.edge_map.push_back(EdgeImage{false, e.id});
    }
    return map;
}

BondingMap bonding(const Source& s, std::size_t n, std::size_t m) {
    const QuotientLevel from = level(s, n);
    const QuotientLevel to = level(s, m);
    return bonding(s, from, to);
}

namespace {

std::string level_pair(std::size_t n, std::size_t m) {
    return std::to_string(n) + "->" + std::to_string(m);
}

// Applies f (bonding of level j down) to an image living at level j.
EdgeImage apply_to_image(const QuotientLevel& lj, const BondingMap& f,
                         const EdgeImage& img) {
    if (img.collapsed) {
        const auto ci = lj.find_class(img.id);
        if (!ci) return EdgeImage{true, "?"};
        return EdgeImage{true, f.vertex_map.at(*ci)};
    }
    const auto ei = lj.graph.find_edge(img.id);
    if (!ei) return EdgeImage{false, "?"};
    return f.edge_map.at(static_cast<std::size_t>(*ei));
}

} // namespace

SystemReport verify_given_system(
    const std::vector<QuotientLevel>& levels,
    const std::vector<std::vector<BondingMap>>& maps) {
    SystemReport rep;
    rep.levels = levels.size();
    for (const QuotientLevel& lv : levels)
        rep.certainty = weakest(rep.certainty, lv.certainty);
    auto fail = [&](std::string why) {
        rep.ok = false;
        rep.violation = std::move(why);
        return rep;
    };

    // Every image must land in its target level.
    for (std::size_t n = 0; n < levels.size(); ++n) {
        for (std::size_t m = 0; m <= n; ++m) {
            const BondingMap& f = maps.at(n).at(m);
            for (const std::string& img : f.vertex_map)
                if (!levels[m].find_class(img))
                    return fail("vertex image " + img + " missing at " +
                                level_pair(n, m));
            for (const EdgeImage& img : f.edge_map) {
                if (img.collapsed) {
                    if (!levels[m].find_class(img.id))
                        return fail("collapsed image " + img.id +
                                    " missing at " + level_pair(n, m));
                } else if (!levels[m].graph.find_edge(img.id)) {
                    return fail("edge image " + img.id + " missing at " +
                                level_pair(n, m));
                }
            }
        }
    }

    // Identity law.
    for (std::size_t n = 0; n < levels.size(); ++n) {
        const BondingMap& f = maps.at(n).at(n);
        for (std::size_t c = 0; c < levels[n].classes.size(); ++c)
            if (f.vertex_map.at(c) != levels[n].classes[c].id)
                return fail("identity violated at level " + std::to_string(n) +
                            " on class " + levels[n].classes[c].id);
        for (int e = 0; e < levels[n].graph.edge_count(); ++e) {
            const EdgeImage& img = f.edge_map.at(static_cast<std::size_t>(e));
            if (img.collapsed || img.id != levels[n].graph.edge(e).id)
                return fail("identity violated at level " + std::to_string(n) +
                            " on edge " + levels[n].graph.edge(e).id);
        }
    }

    // Composition law on every vertex and edge.
    for (std::size_t n = 0; n < levels.size(); ++n) {
        for (std::size_t j = 0; j <= n; ++j) {
            for (std::size_t m = 0; m <= j; ++m) {
                const BondingMap& fnm = maps[n][m];
                const BondingMap& fnj = maps[n][j];
                const BondingMap& fjm = maps[j][m];
                for (std::size_t c = 0; c < levels[n].classes.size(); ++c) {
                    const auto cj = levels[j].find_class(fnj.vertex_map.at(c));
                    if (!cj || fjm.vertex_map.at(*cj) != fnm.vertex_map.at(c))
                        return fail("composition violated at " +
                                    level_pair(n, j) + "->" +
                                    std::to_string(m) + " on class " +
                                    levels[n].classes[c].id);
                }
                for (int e = 0; e < levels[n].graph.edge_count(); ++e) {
                    const EdgeImage direct =
                        fnm.edge_map.at(static_cast<std::size_t>(e));
                    const EdgeImage composed = apply_to_image(
                        levels[j], fjm,
                        fnj.edge_map.at(static_cast<std::size_t>(e)));
                    if (!(direct == composed))
                        return fail("composition violated at " +
                                    level_pair(n, j) + "->" +
                                    std::to_string(m) + " on edge " +
                                    levels[n].graph.edge(e).id);
                }
            }
        }
    }

    // Surjectivity of every map.
    for (std::size_t n = 0; n < levels.size(); ++n) {
        for (std::size_t m = 0; m <= n; ++m) {
            const BondingMap& f = maps[n][m];
            std::vector<char> class_hit(levels[m].classes.size(), 0);
            for (const std::string& img : f.vertex_map) {
                const auto ci = levels[m].find_class(img);
                if (!ci)
                    return fail("vertex image " + img + " missing at " +
                                level_pair(n, m));
                class_hit[*ci] = 1;
            }
            for (std::size_t c = 0; c < class_hit.size(); ++c)
                if (!class_hit[c])
                    return fail("class " + levels[m].classes[c].id +
                                " has no preimage under " + level_pair(n, m));
            std::vector<char> edge_hit(
                static_cast<std::size_t>(levels[m].graph.edge_count()), 0);
            for (const EdgeImage& img : f.edge_map) {
                if (img.collapsed) continue;
                const auto ei = levels[m].graph.find_edge(img.id);
                if (!ei)
                    return fail("edge image " + img.id + " missing at " +
                                level_pair(n, m));
                edge_hit[static_cast<std::size_t>(*ei)] = 1;
            }
            for (std::size_t e = 0; e < edge_hit.size(); ++e)
                if (!edge_hit[e])
                    return fail("edge " +
                                levels[m].graph.edge(static_cast<int>(e)).id +
                                " has no preimage under " + level_pair(n, m));
        }
    }
    return rep;
}

SystemReport verify_system(const Source& s, std::size_t n_max) {
    std::vector<QuotientLevel> levels;
    for (std::size_t n = 0; n <= n_max; ++n) levels.push_back(level(s, n));
    std::vector<std::vector<BondingMap>> maps(levels.size());
    for (std::size_t n = 0; n < levels.size(); ++n)
        for (std::size_t m = 0; m <= n; ++m)
            maps[n].push_back(bonding(s, levels[n], levels[m]));
    return verify_given_system(levels, maps);
}

std::string export_dot(const QuotientLevel& lv) {
    std::string out = "digraph {\n";
    const std::string prefix = std::to_string(lv.index) + ":";
    for (const LevelClass& c : lv.classes) {
        out += "  \"" + prefix + c.id + "\"";
        if (c.size.infinite) out += " [peripheries=2]";
        out += ";\n";
    }
    for (const Edge& e : lv.graph.edges()) {
        out += "  \"" + prefix + lv.graph.vertex_id(e.tail) + "\" -> \"" +
               prefix + lv.graph.vertex_id(e.head) + "\"";
        if (e.kind == EdgeKind::Quotient) out += " [style=dashed,label=\"inf\"]";
        out += ";\n";
    }
    out += "}\n";
    return out;
}

} // namespace endspace
