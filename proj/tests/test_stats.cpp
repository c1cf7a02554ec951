#include "hawkes/rng.hpp"
#include "hawkes/stats.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

using namespace hawkes;

TEST_CASE("normal quantile inverts the cdf") {
    CHECK(stats::normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(stats::normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(stats::normal_quantile(0.995) == doctest::Approx(2.5758293035489004).epsilon(1e-12));
    for (double p = 1e-8; p < 1.0; p *= 1.7) {
        CHECK(stats::normal_cdf(stats::normal_quantile(p)) == doctest::Approx(p).epsilon(1e-9));
    }
    CHECK_THROWS_AS((void)stats::normal_quantile(0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)stats::normal_quantile(1.0), std::invalid_argument);
}

TEST_CASE("summary statistics") {
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    const auto s = stats::summarize(x);
    CHECK(s.mean == 2.5);
    CHECK(s.variance == doctest::Approx(5.0 / 3.0));
    CHECK(s.standard_error == doctest::Approx(std::sqrt(5.0 / 12.0)));
}

TEST_CASE("Kolmogorov survival function") {
    // Q(1) from the series: 2 * sum (-1)^{k-1} exp(-2 k^2)
    CHECK(stats::kolmogorov_survival(1.0) == doctest::Approx(0.26999967167735456).epsilon(1e-12));
    CHECK(stats::kolmogorov_survival(0.0) == 1.0);
    CHECK(stats::kolmogorov_survival(5.0) < 1e-20);
}

TEST_CASE("two-sample KS test separates shifted samples and accepts equal laws") {
    RandomStream rng(5);
    std::vector<double> a(5000), b(5000), c(5000);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = rng.exponential(1.0);
        b[i] = rng.exponential(1.0);
        c[i] = rng.exponential(1.0) + 0.2;
    }
    CHECK(stats::ks_two_sample(a, b).p_value > 0.001);
    CHECK(stats::ks_two_sample(a, c).p_value < 1e-6);
    CHECK(stats::ks_two_sample(a, a).statistic == 0.0);
}

TEST_CASE("random stream draws") {
    RandomStream rng(99);
    double sum = 0.0;
    double sum_p = 0.0;
    double sum_big = 0.0;
    const int n = 100'000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += rng.exponential(2.0);
        sum_p += static_cast<double>(rng.poisson(0.5));
        sum_big += static_cast<double>(rng.poisson(800.0));
    }
    CHECK(std::abs(sum / n - 0.5) < 3 * 0.5 / std::sqrt(n) * 1.5);
    CHECK(std::abs(sum_p / n - 0.5) < 4 * std::sqrt(0.5 / n));
    CHECK(std::abs(sum_big / n - 800.0) < 4 * std::sqrt(800.0 / n));
    CHECK(derive_seed(1, 2) == derive_seed(1, 2));
    CHECK(derive_seed(1, 2) != derive_seed(1, 3));
    CHECK(derive_seed(1, 2) != derive_seed(2, 2));
}
