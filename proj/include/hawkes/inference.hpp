#pragma once

#include "hawkes/renewal.hpp"
#include "hawkes/simulation.hpp"

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hawkes {

/// Raised when an estimator has too few complete cycles to be formed.
class InsufficientCycles : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Bounds {
    double low;
    double high;
};

/// Functional of the window state through its atom count N((-A, 0]).
class WindowFunctional {
public:
    enum class Kind { count, indicator_empty, count_capped, custom };

    static WindowFunctional count() { return WindowFunctional(Kind::count); }
    static WindowFunctional indicator_empty() { return WindowFunctional(Kind::indicator_empty); }
    static WindowFunctional count_capped(std::size_t cap);
    static WindowFunctional custom(std::string name, std::function<double(std::size_t)> fn,
                                   std::optional<Bounds> bounds = {});

    /// Parses "count", "indicator_empty" or "count_capped:<n>".
    static WindowFunctional parse(const std::string& id);

    [[nodiscard]] double operator()(std::size_t count) const;
    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::optional<Bounds>& bounds() const noexcept { return bounds_; }
    [[nodiscard]] std::string id() const;

private:
    explicit WindowFunctional(Kind kind);

    Kind kind_;
    std::size_t cap_ = 0;
    std::string name_;
    std::function<double(std::size_t)> fn_;
    std::optional<Bounds> bounds_;
};

/// Exact integral of f(X_t) over [from, to) for sorted atoms (window count is
/// piecewise constant, changing at each u and u + A).
[[nodiscard]] double integrate_window(std::span<const double> atoms, double window, double from, double to,
                                      const WindowFunctional& f);

/// (1/T) * integral_0^T f(X_t) dt over the path.
[[nodiscard]] double time_average(const SimulationPath& path, const WindowFunctional& f, double window, double T);

struct CycleStatistic {
    double integral;    // I_k f
    double duration;    // tau_k - tau_{k-1}
};

[[nodiscard]] std::vector<CycleStatistic> cycle_integrals(const std::vector<Excursion>& cycles,
                                                          const WindowFunctional& f, double window);

/// Ratio estimator sum I_k f / sum durations.
[[nodiscard]] double estimate_pi(std::span<const CycleStatistic> cycles);

/// Mean of (I_k f - pi_hat d_k)^2 over cycles divided by the mean duration.
[[nodiscard]] double estimate_sigma2(std::span<const CycleStatistic> cycles, double pi_hat);

struct Interval {
    double low;
    double high;
};

[[nodiscard]] Interval clt_interval(double pi_hat, double sigma2_hat, double T, double level);

struct BernsteinResult {
    double epsilon;
    double v;
    double c;
};

/// Radius epsilon_eta of the simplified Bernstein bound from its constants.
[[nodiscard]] BernsteinResult bernstein_epsilon(double range, double mean_tau, double v, double c, double T,
                                                double eta);

/// v and c built from the exponential moment E[exp(alpha tau)], then epsilon_eta.
/// `alpha_limit` is min(lambda, gamma+); alpha must be strictly below it.
[[nodiscard]] BernsteinResult bernstein_epsilon(double a, double b, double alpha, double alpha_limit,
                                                double mean_tau, double exp_moment, double T, double eta);

/// 4 exp(-(T eps - |b-a| E tau)^2 / (4 (2v + c (T eps - |b-a| E tau)))), unclipped.
[[nodiscard]] double bernstein_tail(double range, double mean_tau, double v, double c, double T, double eps);

struct ConcentrationInputs {
    double a = 0.0;
    double b = 1.0;
    std::vector<CycleStatistic> cycles;
    std::vector<double> tau0_samples;   // used only when the initial window is not empty
    bool empty_initial = true;
    double T = 0.0;
    double epsilon = 0.0;
    int k_max = 12;
};

struct ConcentrationResult {
    double bound = 1.0;
    std::vector<double> terms;
    bool vacuous = false;       // a numerator was nonpositive; bound reported as 1
    int k_max_used = 0;
    double c_plus_f = 0.0, c_minus_f = 0.0, c_plus_tau = 0.0, c_minus_tau = 0.0, c_plus_tau0 = 0.0;
    std::vector<std::string> warnings;
};

/// Five-term exponential bound with the sup over k of the moment constants
/// truncated at k_max and estimated from the supplied cycles.
[[nodiscard]] ConcentrationResult concentration_bound_full(const ConcentrationInputs& in);

/// sup_{3<=k<=k_max} ((2/k!) E[(x)_sign^k] / denom)^{1/(k-2)} over samples x.
[[nodiscard]] double moment_constant(std::span<const double> centered, double denom, int k_max, bool positive);

struct EstimatorReport {
    double pi_hat = 0.0;
    double sigma2_hat = 0.0;
    double mean_tau = 0.0;
    double var_tau = 0.0;
    std::size_t n_cycles = 0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::optional<double> epsilon_eta;
};

/// Pools cycle statistics into point estimates and a CLT interval at `level`
/// for an observation length T.
[[nodiscard]] EstimatorReport make_report(std::span<const CycleStatistic> cycles, double T, double level);

} // namespace hawkes
