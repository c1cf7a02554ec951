#pragma once

#include "hawkes/cluster.hpp"
#include "hawkes/kernel.hpp"
#include "hawkes/rng.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace hawkes {

/// Service-time law of an M/G/infinity queue.
///
/// Deterministic, empirical and shifted-cluster services have a step survival
/// function 1 - G backed by a sorted sample table, which makes the Takacs
/// integral exact piece by piece. Exponential services go through adaptive
/// quadrature with a closed-form tail.
class ServiceModel {
public:
    enum class Kind { deterministic, exponential, shifted_cluster, empirical };

    static ServiceModel deterministic(double duration);
    static ServiceModel exponential(double rate);
    /// Services H + A with H the length of a cluster of kernel `k`. The survival
    /// table used by the transforms is built from `table_size` clusters.
    static ServiceModel shifted_cluster(SignedKernel k, double shift, std::size_t table_size = 200'000,
                                        std::uint64_t table_seed = 0x5eed);
    /// `tail_rate` defaults to +inf (finite support).
    static ServiceModel empirical(std::vector<double> samples, std::optional<double> tail_rate = {});

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    /// gamma with 1 - G(t) = O(exp(-gamma t)); +inf for bounded services.
    [[nodiscard]] double tail_rate() const noexcept { return tail_rate_; }
    [[nodiscard]] double mean() const noexcept { return mean_; }
    [[nodiscard]] bool has_step_survival() const noexcept { return kind_ != Kind::exponential; }
    /// Sorted atoms of the step survival function.
    [[nodiscard]] std::span<const double> step_points() const noexcept { return table_; }

    /// 1 - G(t) = P(service > t).
    [[nodiscard]] double survival(double t) const;
    /// Integral of 1 - G over [0, t].
    [[nodiscard]] double integrated_survival(double t) const;

    [[nodiscard]] double draw(RandomStream& rng) const;

private:
    ServiceModel() = default;
    void set_table(std::vector<double> samples);

    Kind kind_ = Kind::deterministic;
    double rate_ = 0.0;
    double tail_rate_ = std::numeric_limits<double>::infinity();
    double mean_ = 0.0;
    double shift_ = 0.0;
    std::optional<SignedKernel> kernel_;
    std::vector<double> table_;     // sorted
    std::vector<double> prefix_;    // prefix_[i] = sum of table_[0..i)
};

struct QueueTrajectory {
    std::vector<double> arrivals;       // sorted
    std::vector<double> departures;     // sorted
    std::vector<double> return_times;   // T_1 < T_2 < ... within the horizon
    std::vector<double> busy_periods;   // B_k = T_k - (first arrival of the busy period)
    double horizon = 0.0;
    double idle_time = 0.0;             // time in [0, horizon] with an empty queue

    /// Y_t = #{arrivals <= t} - #{departures <= t}.
    [[nodiscard]] std::size_t customers_at(double t) const;
};

/// Queue trajectory from paired customers (arrival_i, departure_i), arrivals sorted.
[[nodiscard]] QueueTrajectory build_queue(std::span<const double> arrivals, std::span<const double> departures,
                                          double horizon);

[[nodiscard]] QueueTrajectory simulate_mg_infty(double lambda, const ServiceModel& service, double horizon,
                                                std::uint64_t seed);

/// Queue of a nonnegative-kernel cluster path with services H_k + A.
[[nodiscard]] QueueTrajectory cluster_queue(const ClusterPath& path, double window);

struct FirstReturn {
    double first_arrival;   // V_1
    double busy_period;     // B
    [[nodiscard]] double return_time() const { return first_arrival + busy_period; }
};

/// One draw of (V_1, B) for a queue started empty, run until its first return.
[[nodiscard]] FirstReturn sample_first_return(double lambda, const ServiceModel& service, RandomStream& rng);

enum class TakacsRoute { automatic, quadrature };

/// J(s) = lambda * int_0^inf (1 - G(t)) exp(-s t - lambda int_0^t (1 - G)) dt.
/// Returns +inf when the integral diverges.
[[nodiscard]] double takacs_integral(double lambda, const ServiceModel& service, double s,
                                     TakacsRoute route = TakacsRoute::automatic);

/// E[exp(-s T_1)] in the singularity-free form 1 - s / ((lambda + s)(1 - J(s))).
[[nodiscard]] double takacs_laplace_T1(double lambda, const ServiceModel& service, double s);

/// f(s) = (lambda + s)/lambda - (s/lambda) / (1 - J(s)), equal to E[exp(-s B)] for s > theta.
[[nodiscard]] double takacs_laplace_B(double lambda, const ServiceModel& service, double s);

/// max(s*, -gamma) with s* the root of J(s) = 1 on s <= 0.
[[nodiscard]] double theta_abscissa(double lambda, const ServiceModel& service, double gamma);

struct TailRate {
    double rate;
    bool attained;  // false: every alpha < rate is valid, rate itself is not
};

[[nodiscard]] TailRate tail_rate(double lambda, double gamma);

/// Concrete decay rate: lambda if attained, otherwise open_fraction * gamma.
[[nodiscard]] double usable_rate(const TailRate& r, double open_fraction = 0.95);

/// lambda C E exp(-alpha (t - E)) bound on P(first hit of 0 after E >= t).
[[nodiscard]] double hitting_after_bound(double lambda, double gamma, double constant, double E, double t,
                                         double open_fraction = 0.95);

} // namespace hawkes
