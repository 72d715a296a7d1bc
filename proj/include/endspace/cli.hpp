#ifndef ENDSPACE_CLI_HPP
#define ENDSPACE_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace endspace {

// One invocation's worth of settings, filled from argv.  No randomness
// anywhere: identical argv and sources give identical output bytes.
struct RunConfig {
    std::string command;
    std::string source_spec;
    std::size_t depth = 8;
    std::string format = "text"; // or "json"
    std::string dot_dir;         // empty: no DOT export
    std::size_t r_max = 3;
    std::size_t sep_bound = 3;
    std::size_t beads = 4;
    std::uint64_t tour_limit = 64;
    std::size_t end_index = 0;
    std::size_t open_level = 0;
    std::string anchor = "C0";
    std::vector<std::string> set_specs;
    bool parallel = false;
};

// Parses argv, dispatches the subcommand, writes results to `out` and
// diagnostics to `err`.  Exit codes: 0 computed (witness-bearing negative
// verdicts included), 2 invalid input, 3 bound exceeded or a non-solid
// level, 4 broken internal invariant.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

} // namespace endspace

#endif
