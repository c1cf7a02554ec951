#include "hawkes/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hawkes {

SignedKernel::SignedKernel(std::vector<KernelPiece> pieces) : pieces_(std::move(pieces)) {
    if (pieces_.empty()) {
        return;
    }
    double expected_start = 0.0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const auto& p = pieces_[i];
        if (!std::isfinite(p.start) || !std::isfinite(p.end) || !std::isfinite(p.value)) {
            throw std::invalid_argument("kernel piece " + std::to_string(i) + " is not finite");
        }
        if (p.start != expected_start) {
            throw std::invalid_argument("kernel piece " + std::to_string(i) +
                                        " does not start where the previous piece ends");
        }
        if (!(p.end > p.start)) {
            throw std::invalid_argument("kernel piece " + std::to_string(i) + " has nonpositive length");
        }
        expected_start = p.end;
    }
    support_bound_ = pieces_.back().end;
}

SignedKernel SignedKernel::constant(double end, double value) {
    return SignedKernel({{0.0, end, value}});
}

bool SignedKernel::is_zero() const noexcept {
    return std::all_of(pieces_.begin(), pieces_.end(), [](const KernelPiece& p) { return p.value == 0.0; });
}

bool SignedKernel::is_nonnegative() const noexcept {
    return std::all_of(pieces_.begin(), pieces_.end(), [](const KernelPiece& p) { return p.value >= 0.0; });
}

int SignedKernel::piece_index(double t) const noexcept {
    if (!(t > 0.0) || t > support_bound_) {
        return -1;
    }
    // first piece whose end is >= t
    auto it = std::lower_bound(pieces_.begin(), pieces_.end(), t,
                               [](const KernelPiece& p, double x) { return p.end < x; });
    return it == pieces_.end() ? -1 : static_cast<int>(it - pieces_.begin());
}

double SignedKernel::operator()(double t) const noexcept {
    const int i = piece_index(t);
    return i < 0 ? 0.0 : pieces_[static_cast<std::size_t>(i)].value;
}

double evaluate(const SignedKernel& k, double t) noexcept {
    return k(t);
}

SignedKernel positive_part(const SignedKernel& k) {
    std::vector<KernelPiece> out(k.pieces().begin(), k.pieces().end());
    for (auto& p : out) {
        p.value = std::max(p.value, 0.0);
    }
    return SignedKernel(std::move(out));
}

double cluster_decay_rate(double mean_offspring, double lifelength) {
    if (mean_offspring <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return (mean_offspring - std::log(mean_offspring) - 1.0) / lifelength;
}

KernelSummary summarize(const SignedKernel& k) {
    KernelSummary s;
    s.support_bound = k.support_bound();
    for (const auto& p : k.pieces()) {
        const double len = p.end - p.start;
        if (p.value > 0.0) {
            s.l1_positive += p.value * len;
            s.positive_support_bound = p.end;
        }
        s.l1_total += std::abs(p.value) * len;
    }
    s.subcritical = s.l1_positive < 1.0;
    s.gamma = cluster_decay_rate(s.l1_positive, s.positive_support_bound);
    return s;
}

} // namespace hawkes
