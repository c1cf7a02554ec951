#pragma once

#include "hawkes/kernel.hpp"
#include "hawkes/simulation.hpp"

#include <vector>

namespace hawkes {

/// Window length A of the auxiliary process X_t = N|(t-A, t] shifted to (-A, 0].
class WindowConfig {
public:
    /// Throws std::invalid_argument unless A >= L(h) and A is finite.
    WindowConfig(double length, const SignedKernel& k);

    [[nodiscard]] double length() const noexcept { return length_; }

private:
    double length_;
};

/// Initial atoms in (-A, 0] followed by the events, one sorted sequence.
[[nodiscard]] std::vector<double> all_atoms(const SimulationPath& path);

[[nodiscard]] PointConfiguration window_state(const SimulationPath& path, double t, double window);

struct Renewals {
    double tau0 = 0.0;
    bool tau0_reached = true;   // false when the path never empties before the horizon
    std::vector<double> returns;   // tau_1 < tau_2 < ... <= horizon
};

/// Entrance and return times of X to the empty configuration, by gap scanning.
[[nodiscard]] Renewals detect_renewals(const SimulationPath& path, double window);

struct Excursion {
    enum class Kind { delay, cycle, partial };
    double start = 0.0;
    double duration = 0.0;
    std::vector<double> events;     // relative to start
    Kind kind = Kind::cycle;
};

struct ExcursionSplit {
    Excursion delay;                // [0, tau_0)
    std::vector<Excursion> cycles;  // [tau_{k-1}, tau_k)
    Excursion partial;              // [tau_K, T], never counted as a cycle
};

[[nodiscard]] ExcursionSplit split_excursions(const SimulationPath& path, double window);

struct MomentEstimate {
    double mean;
    double standard_error;
    std::size_t samples;
};

/// Empirical E[exp(alpha * duration)] over cycles; rejects alpha >= min(lambda, gamma+).
[[nodiscard]] MomentEstimate estimate_exp_moment(const std::vector<Excursion>& cycles, double alpha, double lambda,
                                                 const KernelSummary& summary);

[[nodiscard]] MomentEstimate estimate_exp_moment(const std::vector<double>& durations, double alpha, double lambda,
                                                 const KernelSummary& summary);

} // namespace hawkes
