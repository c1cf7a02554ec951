#pragma once

#include "hawkes/kernel.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace hawkes {

/// Finite sorted set of event times inside the half-open window (left, right].
class PointConfiguration {
public:
    PointConfiguration() = default;

    /// Sorts the atoms; throws std::invalid_argument on atoms outside the
    /// window, duplicates or non-finite values.
    PointConfiguration(std::vector<double> atoms, double left, double right);

    static PointConfiguration empty(double left, double right) { return {{}, left, right}; }

    [[nodiscard]] std::span<const double> atoms() const noexcept { return atoms_; }
    [[nodiscard]] double left() const noexcept { return left_; }
    [[nodiscard]] double right() const noexcept { return right_; }
    [[nodiscard]] std::size_t size() const noexcept { return atoms_.size(); }
    [[nodiscard]] bool is_empty() const noexcept { return atoms_.empty(); }

    /// Atoms restricted to (left, right] of a narrower window.
    [[nodiscard]] PointConfiguration restrict_to(double left, double right) const;

    friend bool operator==(const PointConfiguration&, const PointConfiguration&) = default;

private:
    std::vector<double> atoms_;
    double left_ = 0.0;
    double right_ = 0.0;
};

/// One atom (u, theta) of the planar Poisson embedding that fell under the
/// dominating intensity.
struct EmbeddingRecord {
    double time;
    double level;
    bool accepted_in_h;
    bool accepted_in_hplus;
};

struct SimulationPath {
    PointConfiguration initial;             // on (-A, 0]
    std::vector<double> events;             // sorted, in (0, horizon]
    double horizon = 0.0;
    std::optional<std::vector<double>> dominating_events;
    std::optional<std::vector<EmbeddingRecord>> embedding_log;
    bool embedding_log_truncated = false;
};

struct SimulationOptions {
    bool keep_embedding_log = true;
    std::size_t max_log_entries = 1'000'000;
};

/// Conditional intensity (lambda + sum_{u < t} h(t - u))^+ over a sorted history.
[[nodiscard]] double intensity_at(const SignedKernel& k, double lambda, std::span<const double> history,
                                  double t);

/// Hawkes process on (0, horizon] from the Poisson embedding recursion.
///
/// Candidates are drawn under the piecewise-constant intensity of the
/// dominating process N^{h+} and thinned against Lambda^h, so the events are
/// identical to those of simulate_coupled with the same seed.
[[nodiscard]] SimulationPath simulate_hawkes(const SignedKernel& k, double lambda,
                                             const PointConfiguration& initial, double horizon,
                                             std::uint64_t seed, const SimulationOptions& options = {});

/// Same as simulate_hawkes but also returns the dominating path N^{h+}.
[[nodiscard]] SimulationPath simulate_coupled(const SignedKernel& k, double lambda,
                                              const PointConfiguration& initial, double horizon,
                                              std::uint64_t seed, const SimulationOptions& options = {});

/// Throws std::invalid_argument unless lambda > 0 and ||h+||_1 < 1.
void validate_simulation_input(const SignedKernel& k, double lambda, double horizon);

} // namespace hawkes
