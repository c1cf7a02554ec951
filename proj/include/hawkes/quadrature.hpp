#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace hawkes {

/// Raised when a numerical routine cannot reach its requested accuracy.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double achieved)
        : std::runtime_error(what + " (achieved relative error " + std::to_string(achieved) + ")"),
          achieved_(achieved) {}

    [[nodiscard]] double achieved_tolerance() const noexcept { return achieved_; }

private:
    double achieved_;
};

struct QuadratureResult {
    double value;
    double error;   // absolute error estimate
};

/// Adaptive 15-point Gauss-Kronrod on [a, b]. Throws NumericalError when the
/// error estimate exceeds rel_tol * |value| (plus a tiny absolute floor).
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol = 1e-9);

} // namespace hawkes
