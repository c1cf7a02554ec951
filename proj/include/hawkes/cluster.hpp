#pragma once

#include "hawkes/kernel.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/simulation.hpp"

#include <cstdint>
#include <vector>

namespace hawkes {

struct Birth {
    double offset;          // time since the ancestor
    std::uint32_t generation;
};

/// Galton-Watson cluster headed by one ancestor (offset 0, generation 0).
struct Cluster {
    std::vector<Birth> births;
    double length = 0.0;    // H: largest birth offset

    [[nodiscard]] std::size_t size() const noexcept { return births.size(); }
};

/// Nonnegative-kernel Hawkes path together with its immigration structure.
struct ClusterPath {
    std::vector<double> ancestors;          // V_k, sorted
    std::vector<double> last_births;        // V_k + H_k, same order
    std::vector<double> events;             // all births in (0, horizon], sorted
    double horizon = 0.0;
};

/// Breadth-first sample of one cluster; each individual has Poisson(||h||_1)
/// children at ages drawn from h / ||h||_1.
[[nodiscard]] Cluster sample_cluster(const SignedKernel& k, RandomStream& rng);

/// Poisson(lambda) ancestors on (0, horizon], each heading an independent
/// cluster; births past the horizon are dropped.
[[nodiscard]] ClusterPath simulate_cluster_path(const SignedKernel& k, double lambda, double horizon,
                                                std::uint64_t seed);

[[nodiscard]] PointConfiguration simulate_hawkes_cluster(const SignedKernel& k, double lambda, double horizon,
                                                         std::uint64_t seed);

/// exp(1 - m) * exp(-gamma x) with m = ||h||_1 and gamma from the summary.
[[nodiscard]] double cluster_tail_bound(const KernelSummary& summary, double x);

} // namespace hawkes
