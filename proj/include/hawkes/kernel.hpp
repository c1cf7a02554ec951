#pragma once

#include <limits>
#include <span>
#include <vector>

namespace hawkes {

/// One constant piece of a reproduction function, active on (start, end].
struct KernelPiece {
    double start;
    double end;
    double value;
};

/// Piecewise-constant signed reproduction function h on (0, L].
///
/// Pieces are contiguous and sorted: the first starts at 0 and each piece
/// starts where the previous one ends. The zero kernel (h = 0, a pure Poisson
/// process) has no pieces and a support bound of 0.
class SignedKernel {
public:
    SignedKernel() = default;

    /// Validates contiguity, ordering and finiteness; throws std::invalid_argument.
    explicit SignedKernel(std::vector<KernelPiece> pieces);

    /// Convenience for a single piece {value on (0, end]}.
    static SignedKernel constant(double end, double value);

    [[nodiscard]] std::span<const KernelPiece> pieces() const noexcept { return pieces_; }
    [[nodiscard]] double support_bound() const noexcept { return support_bound_; }
    [[nodiscard]] bool is_zero() const noexcept;
    [[nodiscard]] bool is_nonnegative() const noexcept;

    /// h(t); 0 outside (0, L].
    [[nodiscard]] double operator()(double t) const noexcept;

    /// Index of the piece containing t, or -1 when t is outside (0, L].
    [[nodiscard]] int piece_index(double t) const noexcept;

private:
    std::vector<KernelPiece> pieces_;
    double support_bound_ = 0.0;
};

struct KernelSummary {
    double l1_positive = 0.0;              // ||h+||_1
    double l1_total = 0.0;                 // integral of |h|
    double support_bound = 0.0;            // L(h)
    double positive_support_bound = 0.0;   // L(h+)
    double gamma = std::numeric_limits<double>::infinity();
    bool subcritical = true;
};

[[nodiscard]] double evaluate(const SignedKernel& k, double t) noexcept;

/// max(h, 0) piecewise; the support bound is kept so windowing is unchanged.
[[nodiscard]] SignedKernel positive_part(const SignedKernel& k);

[[nodiscard]] KernelSummary summarize(const SignedKernel& k);

/// Cluster-length decay rate (m - log m - 1) / L for offspring mean m.
/// Returns +inf when m == 0 (no cluster).
[[nodiscard]] double cluster_decay_rate(double mean_offspring, double lifelength);

} // namespace hawkes
