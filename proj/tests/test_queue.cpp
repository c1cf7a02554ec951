#include "hawkes/cluster.hpp"
#include "hawkes/queue.hpp"
#include "hawkes/replicas.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace hawkes;

namespace {

std::vector<FirstReturn> first_returns(double lambda, const ServiceModel& g, std::size_t n, std::uint64_t seed) {
    const auto chunks = parallel_map(100, [&](std::size_t c) {
        RandomStream rng(derive_seed(seed, c));
        std::vector<FirstReturn> out(n / 100);
        for (auto& r : out) {
            r = sample_first_return(lambda, g, rng);
        }
        return out;
    });
    std::vector<FirstReturn> all;
    for (const auto& c : chunks) {
        all.insert(all.end(), c.begin(), c.end());
    }
    return all;
}

} // namespace

TEST_CASE("service models") {
    const auto d = ServiceModel::deterministic(1.5);
    CHECK(d.mean() == 1.5);
    CHECK(std::isinf(d.tail_rate()));
    CHECK(d.survival(1.0) == 1.0);
    CHECK(d.survival(1.5) == 0.0);
    CHECK(d.integrated_survival(3.0) == doctest::Approx(1.5));

    const auto e = ServiceModel::exponential(2.0);
    CHECK(e.tail_rate() == 2.0);
    CHECK(e.survival(1.0) == doctest::Approx(std::exp(-2.0)));
    CHECK(e.integrated_survival(1.0) == doctest::Approx((1.0 - std::exp(-2.0)) / 2.0));

    const auto emp = ServiceModel::empirical({1.0, 3.0});
    CHECK(emp.mean() == 2.0);
    CHECK(emp.survival(2.0) == 0.5);
    CHECK(emp.integrated_survival(5.0) == doctest::Approx(2.0));

    const auto k = SignedKernel::constant(2.0, 0.25);
    const auto sc = ServiceModel::shifted_cluster(k, 2.0, 50'000);
    CHECK(sc.tail_rate() == doctest::Approx(summarize(k).gamma));
    // E[H] + A with E[size] = 2, so H averages under 2 * L; the shift is exact
    CHECK(sc.survival(1.999) == 1.0);
    CHECK(sc.mean() > 2.0);

    CHECK_THROWS_AS((void)ServiceModel::exponential(0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)ServiceModel::deterministic(-1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)ServiceModel::empirical({}), std::invalid_argument);
}

TEST_CASE("simulate_mg_infty rejects bad input") {
    CHECK_THROWS_AS((void)simulate_mg_infty(0.0, ServiceModel::deterministic(1.0), 10.0, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)simulate_mg_infty(1.0, ServiceModel::deterministic(1.0), -1.0, 1), std::invalid_argument);
}

TEST_CASE("deterministic service: empty fraction e^{-1}") {
    const auto g = ServiceModel::deterministic(1.0);
    const auto fractions = parallel_map(20, [&](std::size_t i) {
        const auto q = simulate_mg_infty(1.0, g, 5000.0, derive_seed(41, i));
        return q.idle_time / q.horizon;
    });
    const auto s = stats::summarize(fractions);
    CHECK(std::abs(s.mean - std::exp(-1.0)) <= 3 * s.standard_error);
}

TEST_CASE("deterministic service: mean first return e") {
    const auto r = first_returns(1.0, ServiceModel::deterministic(1.0), 100'000, 42);
    std::vector<double> t;
    for (const auto& x : r) {
        t.push_back(x.return_time());
    }
    const auto s = stats::summarize(t);
    CHECK(std::abs(s.mean - std::exp(1.0)) <= 3 * s.standard_error);
}

TEST_CASE("zero service: first return is the first arrival") {
    const auto g = ServiceModel::deterministic(0.0);
    RandomStream rng(43);
    std::vector<double> t;
    for (int i = 0; i < 20'000; ++i) {
        const auto r = sample_first_return(2.0, g, rng);
        CHECK(r.busy_period == 0.0);
        t.push_back(r.return_time());
    }
    const auto s = stats::summarize(t);
    CHECK(std::abs(s.mean - 0.5) <= 3 * s.standard_error);
    const auto q = simulate_mg_infty(2.0, g, 100.0, 44);
    CHECK(q.return_times == q.arrivals);
}

TEST_CASE("trajectory sanity at return times") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto q = simulate_mg_infty(1.5, ServiceModel::exponential(1.0), 500.0, seed);
        CHECK(q.return_times.size() == q.busy_periods.size());
        for (std::size_t k = 0; k < q.return_times.size(); ++k) {
            const double t = q.return_times[k];
            CHECK(q.customers_at(t) == 0);
            CHECK(q.customers_at(std::nextafter(t, 0.0)) > 0);
        }
        for (double t = 0.0; t < 500.0; t += 0.37) {
            const auto in = std::upper_bound(q.arrivals.begin(), q.arrivals.end(), t) - q.arrivals.begin();
            const auto out = std::upper_bound(q.departures.begin(), q.departures.end(), t) - q.departures.begin();
            CHECK(in >= out);
        }
    }
}

TEST_CASE("Takacs transforms for deterministic service 1") {
    const auto g = ServiceModel::deterministic(1.0);
    const double oracle = 1.0 / (1.0 + std::exp(2.0));
    CHECK(takacs_integral(1.0, g, 1.0) == doctest::Approx((1.0 - std::exp(-2.0)) / 2.0).epsilon(1e-13));
    CHECK(takacs_laplace_T1(1.0, g, 1.0) == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(takacs_laplace_B(1.0, g, 1.0) == doctest::Approx(2.0 * oracle).epsilon(1e-12));
    CHECK(takacs_laplace_T1(1.0, g, 0.0) == 1.0);
    CHECK(takacs_laplace_B(1.0, g, 0.0) == 1.0);
    CHECK(takacs_laplace_T1(1.0, g, 1e-9) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(takacs_laplace_T1(1.0, g, 1000.0) < 1e-3);
    CHECK(takacs_laplace_T1(1.0, g, 10.0) < takacs_laplace_T1(1.0, g, 5.0));
}

TEST_CASE("quadrature and exact step routes agree") {
    const auto d = ServiceModel::deterministic(1.0);
    const auto emp = ServiceModel::empirical({0.3, 0.9, 1.7, 2.2, 4.0});
    for (double s : {-0.5, 0.0, 0.5, 1.0, 3.0}) {
        CHECK(takacs_integral(1.0, d, s, TakacsRoute::quadrature) ==
              doctest::Approx(takacs_integral(1.0, d, s)).epsilon(1e-9));
        CHECK(takacs_integral(0.7, emp, s, TakacsRoute::quadrature) ==
              doctest::Approx(takacs_integral(0.7, emp, s)).epsilon(1e-9));
    }
}

TEST_CASE("exponential service integral against closed forms") {
    // J(0) = 1 - exp(-c), J(mu) = 1 - (1 - exp(-c)) / c with c = lambda / mu
    for (double mu : {0.5, 1.0, 3.0}) {
        for (double lambda : {0.4, 1.0, 2.0}) {
            const auto g = ServiceModel::exponential(mu);
            const double c = lambda / mu;
            CHECK(takacs_integral(lambda, g, 0.0) == doctest::Approx(1.0 - std::exp(-c)).epsilon(1e-9));
            CHECK(takacs_integral(lambda, g, mu) == doctest::Approx(1.0 - (1.0 - std::exp(-c)) / c).epsilon(1e-9));
        }
    }
    CHECK(std::isinf(takacs_integral(1.0, ServiceModel::exponential(1.0), -1.0)));
}

TEST_CASE("transform matches Monte Carlo for s in {0.5, 1, 2}") {
    const auto g = ServiceModel::deterministic(1.0);
    const auto r = first_returns(1.0, g, 100'000, 45);
    for (double s : {0.5, 1.0, 2.0}) {
        std::vector<double> e;
        for (const auto& x : r) {
            e.push_back(std::exp(-s * x.return_time()));
        }
        const auto st = stats::summarize(e);
        CHECK(std::abs(st.mean - takacs_laplace_T1(1.0, g, s)) <= 3 * st.standard_error);
    }
    const auto ex = ServiceModel::exponential(2.0);
    const auto re = first_returns(1.0, ex, 100'000, 46);
    std::vector<double> e;
    for (const auto& x : re) {
        e.push_back(std::exp(-x.return_time()));
    }
    const auto st = stats::summarize(e);
    CHECK(std::abs(st.mean - takacs_laplace_T1(1.0, ex, 1.0)) <= 3 * st.standard_error);
}

TEST_CASE("busy period exponential moment below the abscissa") {
    const auto g = ServiceModel::deterministic(1.0);
    const double beta = 0.3;
    const double f = takacs_laplace_B(1.0, g, -beta);
    CHECK(f >= 1.0);
    const auto r = first_returns(1.0, g, 100'000, 47);
    std::vector<double> e;
    for (const auto& x : r) {
        e.push_back(std::exp(beta * x.busy_period));
    }
    const auto all = stats::summarize(e);
    CHECK(std::abs(all.mean - f) <= 3 * all.standard_error);
    const std::vector<double> half(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(e.size() / 2));
    const auto h = stats::summarize(half);
    CHECK(std::isfinite(h.mean));
    CHECK(std::abs(all.mean - h.mean) <= 3 * h.standard_error);
}

TEST_CASE("first arrival and busy period are uncorrelated") {
    const auto r = first_returns(1.0, ServiceModel::exponential(1.0), 100'000, 48);
    std::vector<double> v, b, vb;
    for (const auto& x : r) {
        v.push_back(x.first_arrival);
        b.push_back(x.busy_period);
    }
    const auto sv = stats::summarize(v);
    const auto sb = stats::summarize(b);
    double cov = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        cov += (v[i] - sv.mean) * (b[i] - sb.mean);
    }
    cov /= static_cast<double>(v.size() - 1);
    const double corr = cov / std::sqrt(sv.variance * sb.variance);
    CHECK(std::abs(corr) <= 3.0 / std::sqrt(static_cast<double>(v.size())));
}

TEST_CASE("theta abscissa") {
    const auto d = ServiceModel::deterministic(1.0);
    CHECK(theta_abscissa(1.0, d, d.tail_rate()) == doctest::Approx(-1.0).epsilon(1e-9));
    // closed form J(s) = lambda (1 - exp(-(s + lambda))) / (s + lambda); J(-lambda) = lambda, so for
    // lambda < 1 the root lies below -lambda and moves to -infinity as lambda -> 0
    double prev = 0.0;
    for (double lambda : {0.3, 0.01, 1e-4}) {
        const double th = theta_abscissa(lambda, d, d.tail_rate());
        const double x = th + lambda;
        CHECK(th < -lambda);
        CHECK(th < prev);
        CHECK(lambda * std::expm1(-x) / -x == doctest::Approx(1.0).epsilon(1e-9));
        prev = th;
    }
    // exponential service: the root of J = 1 lies strictly inside (-gamma, 0)
    for (double mu : {0.5, 1.0, 2.0}) {
        const auto e = ServiceModel::exponential(mu);
        const double th = theta_abscissa(1.0, e, mu);
        CHECK(th > -mu);
        CHECK(th < 0.0);
        CHECK(takacs_integral(1.0, e, th) == doctest::Approx(1.0).epsilon(1e-8));
    }
    // a cap below the root is returned as -gamma
    CHECK(theta_abscissa(1.0, d, 0.4) == -0.4);
}

TEST_CASE("the abscissa integral decreases in s") {
    for (const auto& g : {ServiceModel::deterministic(1.0), ServiceModel::exponential(1.5),
                          ServiceModel::empirical({0.2, 0.5, 2.0})}) {
        double prev = takacs_integral(1.0, g, -0.9);
        for (double s = -0.8; s < 5.0; s += 0.1) {
            const double j = takacs_integral(1.0, g, s);
            CHECK(j < prev);
            prev = j;
        }
    }
}

TEST_CASE("transforms reject arguments left of the abscissa") {
    const auto d = ServiceModel::deterministic(1.0);
    CHECK_THROWS_AS((void)takacs_laplace_B(1.0, d, -1.5), std::domain_error);
    CHECK_THROWS_AS((void)takacs_laplace_T1(1.0, ServiceModel::exponential(1.0), -1.0), std::domain_error);
}

TEST_CASE("tail rate rules") {
    auto r = tail_rate(0.5, 1.0);
    CHECK(r.rate == 0.5);
    CHECK(r.attained);
    r = tail_rate(2.0, 1.0);
    CHECK(r.rate == 1.0);
    CHECK_FALSE(r.attained);
    r = tail_rate(1.0, 1.0);
    CHECK(r.rate == 1.0);
    CHECK_FALSE(r.attained);
    CHECK(usable_rate(tail_rate(2.0, 1.0)) == doctest::Approx(0.95));
    CHECK(usable_rate(tail_rate(0.5, 1.0)) == 0.5);
}

TEST_CASE("hitting bound") {
    CHECK(hitting_after_bound(1.0, 2.0, 1.0, 0.0, 3.0) == 0.0);
    CHECK(hitting_after_bound(1.5, 2.0, 0.7, 2.0, 2.0) == doctest::Approx(1.5 * 0.7 * 2.0));
    CHECK(hitting_after_bound(1.0, 2.0, 1.0, 2.0, 4.0) == doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-12));
    CHECK(hitting_after_bound(1.0, 2.0, 1.0, 2.0, 4.0) == doctest::Approx(0.270671).epsilon(1e-5));
    CHECK_THROWS_AS((void)hitting_after_bound(1.0, 2.0, 1.0, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("build_queue rejects unpaired customers") {
    const std::vector<double> a{1.0, 2.0};
    const std::vector<double> d{1.5};
    CHECK_THROWS_AS((void)build_queue(a, d, 10.0), std::invalid_argument);
    const std::vector<double> bad{0.5, 3.0};
    CHECK_THROWS_AS((void)build_queue(a, bad, 10.0), std::invalid_argument);
}
