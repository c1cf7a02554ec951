#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hawkes {

/// Random stream owned by one replica.
///
/// Variates are produced by explicit inversion on top of mt19937_64 so the
/// same seed gives the same path with any standard library.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    double uniform_open_left() { return 1.0 - uniform(); }

    double exponential(double rate) { return -std::log(uniform_open_left()) / rate; }

    /// Poisson variate by sequential inversion; intended for moderate means.
    std::uint64_t poisson(double mean);

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of replica `index` under `master`; a pure function of both.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

} // namespace hawkes
