#include "hawkes/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace hawkes {

std::uint64_t RandomStream::poisson(double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) {
        throw std::invalid_argument("poisson mean must be finite and nonnegative");
    }
    if (mean == 0.0) {
        return 0;
    }
    if (mean > 500.0) {
        // count unit-rate exponential gaps; avoids underflow of exp(-mean)
        std::uint64_t n = 0;
        double acc = exponential(1.0);
        while (acc <= mean) {
            ++n;
            acc += exponential(1.0);
        }
        return n;
    }
    const double u = uniform();
    double p = std::exp(-mean);
    double cdf = p;
    std::uint64_t n = 0;
    while (u >= cdf) {
        ++n;
        p *= mean / static_cast<double>(n);
        const double next = cdf + p;
        if (next == cdf) {
            break;
        }
        cdf = next;
    }
    return n;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

} // namespace hawkes
