#include "hawkes/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

namespace hawkes {

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol) {
    if (a == b) {
        return {0.0, 0.0};
    }
    double error = 0.0;
    double l1 = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, 30, rel_tol * 1e-2, &error, &l1);
    const double scale = std::max(std::abs(value), 1e-300);
    const double absolute = error;
    if (!std::isfinite(value) || absolute > rel_tol * scale + 1e-15) {
        throw NumericalError("adaptive quadrature did not converge", absolute / scale);
    }
    return {value, absolute};
}

} // namespace hawkes
