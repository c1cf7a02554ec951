#pragma once

#include <span>
#include <vector>

namespace hawkes::stats {

[[nodiscard]] double normal_cdf(double x);

/// Inverse standard normal CDF; absolute error below 1e-12 on (1e-300, 1 - 1e-16).
[[nodiscard]] double normal_quantile(double p);

struct Summary {
    double mean = 0.0;
    double variance = 0.0;      // unbiased
    double standard_error = 0.0;
    std::size_t n = 0;
};

[[nodiscard]] Summary summarize(std::span<const double> xs);

struct KsResult {
    double statistic;
    double p_value;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
[[nodiscard]] KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Kolmogorov survival function Q(x) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2).
[[nodiscard]] double kolmogorov_survival(double x);

/// Binomial standard error sqrt(p (1 - p) / n).
[[nodiscard]] double binomial_se(double p, std::size_t n);

} // namespace hawkes::stats
