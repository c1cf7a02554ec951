#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <type_traits>
#include <vector>

namespace hawkes {

/// Reference loop: result[i] = fn(i) in index order.
template <class Fn>
auto serial_map(std::size_t n, Fn&& fn) -> std::vector<std::invoke_result_t<Fn&, std::size_t>> {
    std::vector<std::invoke_result_t<Fn&, std::size_t>> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(fn(i));
    }
    return out;
}

/// OpenMP version of serial_map. Each index writes only its own slot, so the
/// result is identical to serial_map whenever fn(i) depends on i alone (e.g.
/// a replica seeded with derive_seed(master, i)). The first exception thrown by
/// any worker is rethrown after the loop.
template <class Fn>
auto parallel_map(std::size_t n, Fn&& fn) -> std::vector<std::invoke_result_t<Fn&, std::size_t>> {
    using T = std::invoke_result_t<Fn&, std::size_t>;
    std::vector<T> out(n);
    std::exception_ptr failure;
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(hawkes_parallel_map_failure)
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return out;
}

} // namespace hawkes
