#include "hawkes/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hawkes {

WindowConfig::WindowConfig(double length, const SignedKernel& k) : length_(length) {
    if (!std::isfinite(length) || !(length > 0.0)) {
        throw std::invalid_argument("window length A must be positive and finite");
    }
    if (length < k.support_bound()) {
        throw std::invalid_argument("window length A = " + std::to_string(length) +
                                    " is shorter than the kernel support L(h) = " +
                                    std::to_string(k.support_bound()) + "; A >= L(h) is required");
    }
}

std::vector<double> all_atoms(const SimulationPath& path) {
    std::vector<double> atoms(path.initial.atoms().begin(), path.initial.atoms().end());
    atoms.insert(atoms.end(), path.events.begin(), path.events.end());
    return atoms;
}

PointConfiguration window_state(const SimulationPath& path, double t, double window) {
    std::vector<double> shifted;
    // An atom u is in the window while t < u + A, the same leave time that
    // renewal detection uses, so states at detected renewals are exactly empty.
    auto collect = [&](std::span<const double> xs) {
        auto lo = std::partition_point(xs.begin(), xs.end(), [&](double u) { return u + window <= t; });
        auto hi = std::upper_bound(xs.begin(), xs.end(), t);
        for (auto it = lo; it < hi; ++it) {
            shifted.push_back(std::max(*it - t, std::nextafter(-window, 0.0)));
        }
    };
    collect(path.initial.atoms());
    collect(path.events);
    return {std::move(shifted), -window, 0.0};
}

Renewals detect_renewals(const SimulationPath& path, double window) {
    std::vector<double> atoms;
    for (double a : path.initial.atoms()) {
        if (a > -window) {
            atoms.push_back(a);
        }
    }
    const bool starts_empty = atoms.empty();
    atoms.insert(atoms.end(), path.events.begin(), path.events.end());

    // u + A is a return time iff no atom falls in (u, u + A]
    std::vector<double> candidates;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const double r = atoms[i] + window;
        if (r > path.horizon) {
            break;
        }
        if (i + 1 == atoms.size() || atoms[i + 1] > r) {
            candidates.push_back(r);
        }
    }

    Renewals out;
    if (starts_empty) {
        out.tau0 = 0.0;
        out.returns = std::move(candidates);
    } else if (candidates.empty()) {
        out.tau0 = std::numeric_limits<double>::quiet_NaN();
        out.tau0_reached = false;
    } else {
        out.tau0 = candidates.front();
        out.returns.assign(candidates.begin() + 1, candidates.end());
    }
    return out;
}

namespace {

Excursion make_excursion(const std::vector<double>& atoms, double from, double to, bool include_to,
                         Excursion::Kind kind) {
    Excursion e;
    e.start = from;
    e.duration = to - from;
    e.kind = kind;
    auto lo = std::lower_bound(atoms.begin(), atoms.end(), from);
    auto hi = include_to ? std::upper_bound(atoms.begin(), atoms.end(), to)
                         : std::lower_bound(atoms.begin(), atoms.end(), to);
    for (auto it = lo; it != hi; ++it) {
        e.events.push_back(*it - from);
    }
    return e;
}

} // namespace

ExcursionSplit split_excursions(const SimulationPath& path, double window) {
    const Renewals r = detect_renewals(path, window);
    const std::vector<double> events(path.events.begin(), path.events.end());
    ExcursionSplit split;

    if (!r.tau0_reached) {
        split.delay.kind = Excursion::Kind::delay;
        split.delay.duration = path.horizon;
        for (double a : path.initial.atoms()) {
            if (a > -window) {
                split.delay.events.push_back(a);
            }
        }
        split.delay.events.insert(split.delay.events.end(), events.begin(), events.end());
        split.partial.kind = Excursion::Kind::partial;
        split.partial.start = path.horizon;
        return split;
    }

    split.delay.kind = Excursion::Kind::delay;
    split.delay.duration = r.tau0;
    for (double a : path.initial.atoms()) {
        if (a > -window) {
            split.delay.events.push_back(a);
        }
    }
    for (double e : events) {
        if (e < r.tau0) {
            split.delay.events.push_back(e);
        }
    }

    double prev = r.tau0;
    split.cycles.reserve(r.returns.size());
    for (double tau : r.returns) {
        split.cycles.push_back(make_excursion(events, prev, tau, false, Excursion::Kind::cycle));
        prev = tau;
    }
    split.partial = make_excursion(events, prev, path.horizon, true, Excursion::Kind::partial);
    return split;
}

MomentEstimate estimate_exp_moment(const std::vector<double>& durations, double alpha, double lambda,
                                   const KernelSummary& summary) {
    const double limit = std::min(lambda, summary.gamma);
    if (!std::isfinite(alpha) || !(alpha < limit)) {
        throw std::invalid_argument("alpha = " + std::to_string(alpha) + " must be below min(lambda, gamma+) = " +
                                    std::to_string(limit) + " for E[exp(alpha tau)] to be finite");
    }
    if (durations.empty()) {
        throw std::invalid_argument("exponential moment needs at least one cycle");
    }
    const double n = static_cast<double>(durations.size());
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double d : durations) {
        const double v = std::exp(alpha * d);
        sum += v;
        sum_sq += v * v;
    }
    const double mean = sum / n;
    const double var = durations.size() > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
    return {mean, std::sqrt(var / n), durations.size()};
}

MomentEstimate estimate_exp_moment(const std::vector<Excursion>& cycles, double alpha, double lambda,
                                   const KernelSummary& summary) {
    std::vector<double> durations;
    durations.reserve(cycles.size());
    for (const auto& c : cycles) {
        durations.push_back(c.duration);
    }
    return estimate_exp_moment(durations, alpha, lambda, summary);
}

} // namespace hawkes
