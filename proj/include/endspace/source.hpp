#ifndef ENDSPACE_SOURCE_HPP
#define ENDSPACE_SOURCE_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "endspace/base.hpp"
#include "endspace/multidigraph.hpp"

namespace endspace {

// Set of enumeration indices, kept sorted and duplicate-free.
using VSet = std::vector<std::size_t>;

VSet normalize_vset(VSet x);
VSet prefix_vset(std::size_t n);

// Component class ids are "C<k>" where k is the enumeration index of the
// smallest vertex the component contains.
std::string component_id(std::size_t rep_index);
std::optional<std::size_t> parse_component_id(const std::string& id);

struct SourceEdgeRef {
    std::string id, tail, head;
};

struct ComponentInfo {
    std::string id;
    std::size_t rep_index = 0;
    Card size;
};

// Answer to "what are the strong components of D - X?", trusted only for
// the first `window` enumerated vertices plus the stated global flags.
struct ComponentAnswer {
    std::vector<std::pair<std::string, std::string>> labels; // vertex id -> class id
    std::vector<ComponentInfo> components;                   // by rep_index
    Card count;              // number of components of all of D - X
    bool all_finite = false; // every component of D - X is a finite set
    Certainty certainty = Certainty::Exact;

    const ComponentInfo* find(const std::string& id) const;
    std::optional<std::string> label_of(const std::string& vertex) const;
};

struct BundleAnswer {
    bool infinite = false;
    std::vector<SourceEdgeRef> edges; // populated when finite
    Certainty certainty = Certainty::Exact;
};

struct DegreeAnswer {
    Card in, out;
    Certainty certainty = Certainty::Exact;
};

struct TraceAnswer {
    Card card;
    Certainty certainty = Certainty::Exact;
};

// One level of an admissible partition chain, as reported by a source that
// carries its own chain (used by sources whose component partitions are not
// finite, e.g. tail partitions of the ray).
struct ClassSpec {
    std::string id;
    bool singleton = false;
    std::string vertex;        // singleton only
    std::size_t rep_index = 0; // smallest enumeration index inside
    Card size;
};

struct BundleSpec {
    std::string from, to;
    bool infinite = false;
    std::vector<SourceEdgeRef> edges;
};

struct CustomLevel {
    std::vector<ClassSpec> classes;
    std::vector<BundleSpec> bundles;
    Certainty certainty = Certainty::Exact;
};

// Lazily enumerated, finitely presented digraph.  Vertices are enumerated
// v_0, v_1, ...; truncation(n) is the induced subdigraph on the first n.
// Oracles answer questions about the full (possibly infinite) digraph and
// carry a certainty flag; Exact answers are final.
class Source {
public:
    virtual ~Source() = default;

    virtual std::string kind() const = 0;
    virtual std::optional<std::size_t> vertex_count() const = 0;
    virtual std::string vertex(std::size_t i) const = 0;
    virtual MultiDigraph truncation(std::size_t n) const = 0;

    virtual ComponentAnswer components(const VSet& x, std::size_t window) const = 0;
    virtual BundleAnswer bundle(const VSet& x, const std::string& a,
                                const std::string& b) const = 0;
    virtual DegreeAnswer degrees(std::size_t i) const = 0;

    // Designated infinite vertex subsets, queryable by name.
    virtual std::vector<std::string> named_sets() const { return {}; }
    virtual bool in_named_set(const std::string& set, std::size_t i) const;
    // Finiteness of U ∩ C for a component reported at separator x.
    virtual TraceAnswer named_trace(const std::string& set, const VSet& x,
                                    const ComponentInfo& comp) const;

    // A source may carry its own admissible partition chain; level n refines
    // level n-1 and isolates the first n vertices.  Without one, levels come
    // from the component oracle and demand solidity.
    virtual bool has_custom_chain() const { return false; }
    virtual CustomLevel custom_level(std::size_t n) const;
    virtual std::string custom_class_of(std::size_t n, std::size_t i) const;

    // min(n, |V|); levels and separators saturate at |V| for finite sources.
    std::size_t clamp(std::size_t n) const;
    std::optional<std::size_t> find_vertex_index(const std::string& id,
                                                 std::size_t bound) const;
};

using SourcePtr = std::shared_ptr<const Source>;

// Vertex set selector for necklace/rank searches.
struct USet {
    enum class Kind { All, Named, Explicit };
    Kind kind = Kind::All;
    std::string name;                  // Named
    std::vector<std::string> vertices; // Explicit

    static USet all() { return USet{}; }
    static USet named(std::string n) { return USet{Kind::Named, std::move(n), {}}; }
    static USet explicit_set(std::vector<std::string> v) {
        return USet{Kind::Explicit, "", std::move(v)};
    }
    std::string display() const;
};

bool uset_contains(const Source& s, const USet& u, std::size_t vertex_index);
TraceAnswer uset_trace(const Source& s, const USet& u, const VSet& x,
                       const ComponentInfo& comp);
USet parse_uset(const Source& s, const std::string& spec);

// Builtin families.  Unknown names raise UnknownBuiltin; bad parameters
// raise BadParams.
SourcePtr make_builtin(const std::string& name,
                       const std::map<std::string, std::string>& params = {});

// Text formats: "source finite" with edge lines, "source stencil" with a
// width and layered edge rules, "source builtin <name> [key=value ...]".
SourcePtr parse_source_text(const std::string& text);
SourcePtr parse_source_file(const std::string& path);
// CLI form: a file path or "builtin:<name>" / "builtin:<name>(k=3)".
SourcePtr resolve_source_spec(const std::string& spec);

struct SolidityReport {
    std::vector<std::string> x_ids;
    Card count;
    bool solid = false;
    Certainty certainty = Certainty::Exact;
};

// Solid at X iff D - X has finitely many strong components.
SolidityReport solidity_check(const Source& s, const VSet& x, std::size_t window);

} // namespace endspace

#endif
