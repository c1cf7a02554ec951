#include "hawkes/simulation.hpp"

#include "hawkes/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hawkes {

PointConfiguration::PointConfiguration(std::vector<double> atoms, double left, double right)
    : atoms_(std::move(atoms)), left_(left), right_(right) {
    if (!(left < right) || std::isnan(left) || std::isnan(right)) {
        throw std::invalid_argument("point configuration window must satisfy left < right");
    }
    std::sort(atoms_.begin(), atoms_.end());
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const double a = atoms_[i];
        if (!std::isfinite(a)) {
            throw std::invalid_argument("point configuration has a non-finite atom");
        }
        if (!(a > left_ && a <= right_)) {
            throw std::invalid_argument("atom outside the configuration window");
        }
        if (i > 0 && atoms_[i - 1] == a) {
            throw std::invalid_argument("point configuration has a repeated atom");
        }
    }
}

PointConfiguration PointConfiguration::restrict_to(double left, double right) const {
    std::vector<double> kept;
    for (double a : atoms_) {
        if (a > left && a <= right) {
            kept.push_back(a);
        }
    }
    return {std::move(kept), left, right};
}

double intensity_at(const SignedKernel& k, double lambda, std::span<const double> history, double t) {
    const double L = k.support_bound();
    double sum = lambda;
    // atoms in [t - L, t) are the only ones that can contribute
    auto first = std::lower_bound(history.begin(), history.end(), t - L);
    for (auto it = first; it != history.end() && *it < t; ++it) {
        sum += k(t - *it);
    }
    return std::max(sum, 0.0);
}

void validate_simulation_input(const SignedKernel& k, double lambda, double horizon) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("immigration rate lambda must be positive and finite");
    }
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw std::invalid_argument("horizon must be positive and finite");
    }
    const auto s = summarize(k);
    if (!s.subcritical) {
        throw std::invalid_argument("kernel is not subcritical: ||h+||_1 = " + std::to_string(s.l1_positive) +
                                    " must be < 1");
    }
}

namespace {

// Sliding view over a growing sorted history; atoms older than t - L are skipped.
struct History {
    std::vector<double> atoms;
    std::size_t live = 0;

    void advance(double t, double L) {
        while (live < atoms.size() && !(t - atoms[live] < L)) {
            ++live;
        }
    }
};

// Value of the excitation sum just after t and the next time it can change.
struct Segment {
    double level;
    double next_break;
};

Segment envelope_segment(const SignedKernel& hplus, double lambda, History& dom, double t) {
    const double L = hplus.support_bound();
    dom.advance(t, L);
    double level = lambda;
    double next = std::numeric_limits<double>::infinity();
    const auto pieces = hplus.pieces();
    for (std::size_t i = dom.live; i < dom.atoms.size(); ++i) {
        const double s = dom.atoms[i];
        const double age = t - s;
        // piece active immediately after `age`
        auto it = std::upper_bound(pieces.begin(), pieces.end(), age,
                                   [](double x, const KernelPiece& p) { return x < p.end; });
        if (it == pieces.end()) {
            continue;
        }
        level += it->value;
        next = std::min(next, s + it->end);
    }
    if (!(next > t)) {
        next = std::nextafter(t, std::numeric_limits<double>::infinity());
    }
    return {level, next};
}

SimulationPath run_embedding(const SignedKernel& k, double lambda, const PointConfiguration& initial,
                             double horizon, std::uint64_t seed, const SimulationOptions& options,
                             bool keep_dominating) {
    validate_simulation_input(k, lambda, horizon);
    if (initial.right() != 0.0) {
        throw std::invalid_argument("initial condition must live on a window ending at 0");
    }
    const SignedKernel hplus = positive_part(k);
    const bool flat_envelope = hplus.is_zero();
    const double L = k.support_bound();

    History dom;
    History own;
    for (double a : initial.atoms()) {
        if (a > -L) {
            dom.atoms.push_back(a);
            own.atoms.push_back(a);
        }
    }
    const std::size_t n_initial = own.atoms.size();

    SimulationPath path;
    path.initial = initial;
    path.horizon = horizon;
    std::vector<EmbeddingRecord> log;
    bool log_on = options.keep_embedding_log;

    RandomStream rng(seed);
    double t = 0.0;
    while (t < horizon) {
        Segment seg = flat_envelope ? Segment{lambda, std::numeric_limits<double>::infinity()}
                                    : envelope_segment(hplus, lambda, dom, t);
        const double u = t + rng.exponential(seg.level);
        if (!(u < seg.next_break)) {
            t = seg.next_break;
            continue;
        }
        if (u > horizon) {
            break;
        }
        t = u;
        if (!dom.atoms.empty() && dom.atoms.back() >= u) {
            // coincident candidate (rounding); reject the duplicate
            continue;
        }
        const double theta = seg.level * rng.uniform_open_left();
        own.advance(u, L);
        const double own_level =
            intensity_at(k, lambda, std::span<const double>(own.atoms).subspan(own.live), u);
        const bool accepted = theta <= own_level;

        dom.atoms.push_back(u);
        if (accepted) {
            own.atoms.push_back(u);
        }
        if (log_on) {
            if (log.size() >= options.max_log_entries) {
                log_on = false;
                log.clear();
                log.shrink_to_fit();
                path.embedding_log_truncated = true;
            } else {
                log.push_back({u, theta, accepted, true});
            }
        }
    }

    const auto initial_in_dom = static_cast<std::ptrdiff_t>(n_initial);
    path.events.assign(own.atoms.begin() + initial_in_dom, own.atoms.end());
    if (keep_dominating) {
        path.dominating_events.emplace(dom.atoms.begin() + initial_in_dom, dom.atoms.end());
    }
    if (log_on) {
        path.embedding_log = std::move(log);
    }
    return path;
}

} // namespace

SimulationPath simulate_hawkes(const SignedKernel& k, double lambda, const PointConfiguration& initial,
                               double horizon, std::uint64_t seed, const SimulationOptions& options) {
    return run_embedding(k, lambda, initial, horizon, seed, options, false);
}

SimulationPath simulate_coupled(const SignedKernel& k, double lambda, const PointConfiguration& initial,
                                double horizon, std::uint64_t seed, const SimulationOptions& options) {
    return run_embedding(k, lambda, initial, horizon, seed, options, true);
}

} // namespace hawkes
