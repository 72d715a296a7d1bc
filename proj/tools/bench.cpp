#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "endspace/parallel.hpp"

using namespace endspace;
using clk = std::chrono::steady_clock;

namespace {

struct Job {
    std::string label;
    SourcePtr source;
    std::size_t depth;
};

double run_ms(const Source& s, std::size_t depth, ExecMode mode,
              std::size_t& levels, std::size_t& edges) {
    const auto t0 = clk::now();
    const auto out = compute_levels(s, depth, mode);
    const auto t1 = clk::now();
    levels = out.size();
    edges = 0;
    for (const QuotientLevel& lv : out)
        edges += static_cast<std::size_t>(lv.graph.edge_count());
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

} // namespace

int main() {
    const std::vector<Job> jobs{
        {"symmetric-ray d=96", make_builtin("symmetric-ray"), 96},
        {"twin-rays d=64", make_builtin("twin-rays"), 64},
        {"necklace k=32 d=48", make_builtin("necklace", {{"k", "32"}}), 48},
        {"dominated-ray d=96", make_builtin("dominated-ray"), 96},
    };
    std::printf("%-22s %10s %10s %8s %8s %6s\n", "source", "serial ms",
                "parallel", "speedup", "levels", "check");
    bool all_ok = true;
    for (const Job& j : jobs) {
        std::size_t ls = 0, es = 0, lp = 0, ep = 0;
        // Warm-up run so first-touch costs do not skew the serial column.
        run_ms(*j.source, j.depth, ExecMode::Serial, ls, es);
        const double serial = run_ms(*j.source, j.depth, ExecMode::Serial, ls, es);
        const double par = run_ms(*j.source, j.depth, ExecMode::Parallel, lp, ep);
        const bool ok = ls == lp && es == ep;
        all_ok = all_ok && ok;
        std::printf("%-22s %10.2f %10.2f %7.2fx %8zu %6s\n", j.label.c_str(),
                    serial, par, par > 0 ? serial / par : 0.0, ls,
                    ok ? "ok" : "DIFF");
    }
    return all_ok ? 0 : 1;
}
