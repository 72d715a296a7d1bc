#include "endspace/parallel.hpp"

#include <cstdint>
#include <exception>
#include <utility>

#include "endspace/core.hpp"

namespace endspace {

namespace {

// First-failure bookkeeping for parallel loops: exceptions may surface in
// any order, but callers must see the one the serial loop would have hit.
struct FirstError {
    std::size_t index = SIZE_MAX;
    std::exception_ptr error;

    void offer(std::size_t i, std::exception_ptr e) {
#pragma omp critical(endspace_first_error)
        if (i < index) {
            index = i;
            error = std::move(e);
        }
    }
    void rethrow_if_set() const {
        if (error) std::rethrow_exception(error);
    }
};

} // namespace

std::vector<QuotientLevel> compute_levels(const Source& s, std::size_t n_max,
                                          ExecMode mode) {
    const std::size_t count = n_max + 1;
    std::vector<QuotientLevel> out(count);
    if (mode == ExecMode::Serial) {
        for (std::size_t n = 0; n < count; ++n) {
            out[n] = level(s, n);
            if (out[n].index < n) {
                out.resize(n); // saturated: this level repeats the last
                break;
            }
        }
        return out;
    }
    FirstError first;
#pragma omp parallel for schedule(dynamic)
    for (std::size_t n = 0; n < count; ++n) {
        try {
            out[n] = level(s, n);
        } catch (...) {
            first.offer(n, std::current_exception());
        }
    }
    // A level past the first failing one may have been produced; the serial
    // order says the error wins.
    for (std::size_t n = 0; n < count; ++n)
        if (n >= first.index)
            first.rethrow_if_set();
        else if (out[n].index < n) {
            out.resize(n);
            return out;
        }
    first.rethrow_if_set();
    return out;
}

std::vector<Cut> cut_sweep(const MultiDigraph& g,
                           const std::vector<std::vector<int>>& sides,
                           ExecMode mode) {
    std::vector<Cut> out(sides.size());
    if (mode == ExecMode::Serial) {
        for (std::size_t i = 0; i < sides.size(); ++i)
            out[i] = cut_sizes(g, sides[i]);
        return out;
    }
    FirstError first;
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < sides.size(); ++i) {
        try {
            out[i] = cut_sizes(g, sides[i]);
        } catch (...) {
            first.offer(i, std::current_exception());
        }
    }
    first.rethrow_if_set();
    return out;
}

} // namespace endspace
