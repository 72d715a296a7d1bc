#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <optional>
#include <string>
#include <vector>

#include "endspace/parallel.hpp"

using namespace endspace;

namespace {

template <typename F>
std::optional<Err> thrown_code(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

std::string digest(const QuotientLevel& lv) {
    std::string d = "L" + std::to_string(lv.index) + "|x:";
    for (const auto& x : lv.x_ids) d += x + ",";
    d += "|c:";
    for (const LevelClass& c : lv.classes) {
        d += c.id + "/" + (c.singleton ? c.vertex : "*") + "/" +
             std::to_string(c.rep_index) + "/" +
             (c.size.infinite ? "inf" : std::to_string(c.size.value)) + ",";
    }
    d += "|v:";
    for (int v = 0; v < lv.graph.vertex_count(); ++v)
        d += lv.graph.vertex_id(v) + ",";
    d += "|e:";
    for (const Edge& e : lv.graph.edges())
        d += e.id + "/" + std::to_string(e.tail) + ">" +
             std::to_string(e.head) + "/" +
             std::to_string(static_cast<int>(e.kind)) + ",";
    d += "|" + std::to_string(static_cast<int>(lv.certainty));
    return d;
}

std::vector<std::string> digests(const std::vector<QuotientLevel>& levels) {
    std::vector<std::string> out;
    for (const QuotientLevel& lv : levels) out.push_back(digest(lv));
    return out;
}

} // namespace

TEST_CASE("parallel level construction reproduces the serial reference") {
    for (const char* name : {"symmetric-ray", "twin-rays", "dominated-ray",
                             "necklace", "zchain", "ray", "reverse-ray"}) {
        CAPTURE(name);
        auto s = make_builtin(name);
        const auto serial = compute_levels(*s, 16, ExecMode::Serial);
        const auto par = compute_levels(*s, 16, ExecMode::Parallel);
        CHECK(digests(serial) == digests(par));
    }
    auto fin = parse_source_text(
        "source finite\nedge a b\nedge b c\nedge c a\n");
    const auto serial = compute_levels(*fin, 12, ExecMode::Serial);
    const auto par = compute_levels(*fin, 12, ExecMode::Parallel);
    REQUIRE(serial.size() == 4); // saturates past the last vertex
    CHECK(digests(serial) == digests(par));
}

TEST_CASE("parallel runs are repeatable") {
    auto s = make_builtin("necklace", {{"k", "8"}});
    const auto first = digests(compute_levels(*s, 24, ExecMode::Parallel));
    for (int run = 0; run < 3; ++run)
        CHECK(digests(compute_levels(*s, 24, ExecMode::Parallel)) == first);
}

TEST_CASE("both modes raise the serial-order error") {
    auto s = make_builtin("outstar");
    CHECK(thrown_code([&] { compute_levels(*s, 4, ExecMode::Serial); }) ==
          Err::NonSolidAtLevel);
    CHECK(thrown_code([&] { compute_levels(*s, 4, ExecMode::Parallel); }) ==
          Err::NonSolidAtLevel);
}

TEST_CASE("cut sweeps agree across modes") {
    auto s = make_builtin("symmetric-ray");
    const MultiDigraph g = s->truncation(64);
    std::vector<std::vector<int>> sides;
    for (int v = 0; v < g.vertex_count(); ++v) sides.push_back({v});
    std::vector<int> prefix;
    for (int v = 0; v + 1 < g.vertex_count(); ++v) {
        prefix.push_back(v);
        sides.push_back(prefix);
    }
    std::uint64_t state = 0x9e3779b97f4a7c15ull;
    for (int k = 0; k < 100; ++k) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        std::vector<int> side;
        for (int v = 0; v < g.vertex_count(); ++v)
            if ((state >> (v % 48)) & 1ull) side.push_back(v);
        state ^= state >> 17;
        if (!side.empty() &&
            side.size() < static_cast<std::size_t>(g.vertex_count()))
            sides.push_back(side);
    }
    const auto serial = cut_sweep(g, sides, ExecMode::Serial);
    const auto par = cut_sweep(g, sides, ExecMode::Parallel);
    REQUIRE(serial.size() == par.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].side1 == par[i].side1);
        CHECK(serial[i].side2 == par[i].side2);
        CHECK(serial[i].forward == par[i].forward);
        CHECK(serial[i].backward == par[i].backward);
    }
}

TEST_CASE("cut sweep reports the first failing side") {
    auto s = make_builtin("symmetric-ray");
    const MultiDigraph g = s->truncation(8);
    // Index 2 is empty, index 5 is out of range; the earlier one must win
    // in either mode.
    std::vector<std::vector<int>> sides{{0}, {1}, {}, {3}, {4}, {999}};
    CHECK(thrown_code([&] { cut_sweep(g, sides, ExecMode::Serial); }) ==
          Err::EmptySide);
    CHECK(thrown_code([&] { cut_sweep(g, sides, ExecMode::Parallel); }) ==
          Err::EmptySide);
}
