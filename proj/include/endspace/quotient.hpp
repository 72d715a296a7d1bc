#ifndef ENDSPACE_QUOTIENT_HPP
#define ENDSPACE_QUOTIENT_HPP

#include <optional>
#include <string>
#include <vector>

#include "endspace/multidigraph.hpp"
#include "endspace/source.hpp"

namespace endspace {

// Raised when a level demands a partition the oracle reports as infinite.
class NonSolidError : public Error {
public:
    explicit NonSolidError(SolidityReport r);
    const SolidityReport& report() const { return report_; }

private:
    SolidityReport report_;
};

struct LevelClass {
    std::string id;
    bool singleton = false;
    std::string vertex;        // singleton only
    std::size_t rep_index = 0; // smallest enumeration index inside
    Card size;
};

// One level of the partition chain: the first n vertices are singletons and
// the rest is partitioned into classes (strong components of D - X_n, or the
// source's own tail classes).  The graph lives on class ids: an infinite
// bundle becomes one Quotient edge, a finite one keeps its edges verbatim.
struct QuotientLevel {
    std::size_t index = 0;
    std::vector<std::string> x_ids;
    std::vector<LevelClass> classes; // ascending rep_index
    MultiDigraph graph;
    // Class id per enumeration index; covers at least every class rep.
    std::vector<std::string> class_of;
    Certainty certainty = Certainty::Exact;

    std::optional<std::size_t> find_class(const std::string& id) const;
};

QuotientLevel level(const Source& s, std::size_t n);

// Partition class ids of the first `window` vertices at level n.
std::vector<std::string> level_classes_of(const Source& s, std::size_t n,
                                          std::size_t window);
std::string level_class_of(const Source& s, std::size_t n, std::size_t idx);

// Image of a level edge under a bonding map: another edge, or the class the
// edge collapses into when both endpoints merge.
struct EdgeImage {
    bool collapsed = false;
    std::string id; // edge id, or class id when collapsed

    bool operator==(const EdgeImage& o) const {
        return collapsed == o.collapsed && id == o.id;
    }
};

struct BondingMap {
    std::size_t from_level = 0, to_level = 0; // to_level <= from_level
    std::vector<std::string> vertex_map;      // by class index of from-level
    std::vector<EdgeImage> edge_map;          // by edge index of from-level
};

BondingMap bonding(const Source& s, const QuotientLevel& from,
                   const QuotientLevel& to);
BondingMap bonding(const Source& s, std::size_t n, std::size_t m);

struct SystemReport {
    bool ok = true;
    std::string violation; // empty when ok, else the first failure
    std::size_t levels = 0;
    Certainty certainty = Certainty::Exact;
};

// Builds levels 0..n_max with all bonding maps and checks the identity law,
// the composition law, and surjectivity of every map.
SystemReport verify_system(const Source& s, std::size_t n_max);

// Same checks on prebuilt data; maps[n][m] must bond level n to level m <= n.
SystemReport verify_given_system(
    const std::vector<QuotientLevel>& levels,
    const std::vector<std::vector<BondingMap>>& maps);

std::string export_dot(const QuotientLevel& lv);

} // namespace endspace

#endif
