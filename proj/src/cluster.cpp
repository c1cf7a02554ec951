#include "hawkes/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace hawkes {

namespace {

struct AgeSampler {
    std::vector<KernelPiece> pieces;
    std::vector<double> cumulative;     // normalized mass up to the end of each piece
    double mass = 0.0;

    explicit AgeSampler(const SignedKernel& k) {
        for (const auto& p : k.pieces()) {
            if (p.value > 0.0) {
                mass += p.value * (p.end - p.start);
                pieces.push_back(p);
                cumulative.push_back(mass);
            }
        }
        for (auto& c : cumulative) {
            c /= mass;
        }
    }

    double draw(RandomStream& rng) const {
        const double u = rng.uniform();
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        const auto i = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), pieces.size() - 1);
        const auto& p = pieces[i];
        return p.start + (p.end - p.start) * rng.uniform_open_left();
    }
};

void require_cluster_kernel(const SignedKernel& k) {
    if (!k.is_nonnegative()) {
        throw std::invalid_argument("cluster representation requires a nonnegative kernel");
    }
    if (!summarize(k).subcritical) {
        throw std::invalid_argument("cluster representation requires ||h||_1 < 1");
    }
}

Cluster grow(const AgeSampler& ages, RandomStream& rng) {
    Cluster c;
    c.births.push_back({0.0, 0});
    if (ages.mass <= 0.0) {
        return c;
    }
    // explicit FIFO of indices into births; no recursion
    std::deque<std::size_t> pending{0};
    while (!pending.empty()) {
        const Birth parent = c.births[pending.front()];
        pending.pop_front();
        const auto children = rng.poisson(ages.mass);
        for (std::uint64_t j = 0; j < children; ++j) {
            const double offset = parent.offset + ages.draw(rng);
            c.births.push_back({offset, parent.generation + 1});
            c.length = std::max(c.length, offset);
            pending.push_back(c.births.size() - 1);
        }
    }
    return c;
}

} // namespace

Cluster sample_cluster(const SignedKernel& k, RandomStream& rng) {
    require_cluster_kernel(k);
    return grow(AgeSampler(k), rng);
}

ClusterPath simulate_cluster_path(const SignedKernel& k, double lambda, double horizon, std::uint64_t seed) {
    require_cluster_kernel(k);
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("immigration rate lambda must be positive and finite");
    }
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw std::invalid_argument("horizon must be positive and finite");
    }
    const AgeSampler ages(k);
    RandomStream rng(seed);
    ClusterPath path;
    path.horizon = horizon;
    double v = rng.exponential(lambda);
    while (v <= horizon) {
        const Cluster c = grow(ages, rng);
        path.ancestors.push_back(v);
        path.last_births.push_back(v + c.length);
        for (const auto& b : c.births) {
            const double t = v + b.offset;
            if (t <= horizon) {
                path.events.push_back(t);
            }
        }
        v += rng.exponential(lambda);
    }
    std::sort(path.events.begin(), path.events.end());
    path.events.erase(std::unique(path.events.begin(), path.events.end()), path.events.end());
    return path;
}

PointConfiguration simulate_hawkes_cluster(const SignedKernel& k, double lambda, double horizon, std::uint64_t seed) {
    auto path = simulate_cluster_path(k, lambda, horizon, seed);
    return {std::move(path.events), 0.0, horizon};
}

double cluster_tail_bound(const KernelSummary& summary, double x) {
    const double m = summary.l1_positive;
    if (!(m > 0.0 && m < 1.0)) {
        throw std::invalid_argument("cluster tail bound needs 0 < ||h||_1 < 1");
    }
    if (!(x >= 0.0)) {
        throw std::invalid_argument("cluster tail bound needs x >= 0");
    }
    return std::exp(1.0 - m - summary.gamma * x);
}

} // namespace hawkes
