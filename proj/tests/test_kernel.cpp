#include "hawkes/kernel.hpp"
#include "hawkes/rng.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <limits>
#include <vector>

using namespace hawkes;

namespace {

// Random contiguous kernel with 1..5 pieces and values in [-1, 1].
SignedKernel random_kernel(RandomStream& rng) {
    const int n = 1 + static_cast<int>(rng.uniform() * 5);
    std::vector<KernelPiece> pieces;
    double start = 0.0;
    for (int i = 0; i < n; ++i) {
        const double end = start + 0.1 + 2.0 * rng.uniform();
        pieces.push_back({start, end, 2.0 * rng.uniform() - 1.0});
        start = end;
    }
    return SignedKernel(pieces);
}

} // namespace

TEST_CASE("evaluate looks up the containing piece") {
    const SignedKernel zero;
    CHECK(evaluate(zero, 0.5) == 0.0);
    const auto k = SignedKernel::constant(2.0, -0.5);
    CHECK(evaluate(k, 1.5) == -0.5);
    CHECK(evaluate(k, 2.5) == 0.0);
    CHECK(evaluate(k, 2.0) == -0.5);
    CHECK(evaluate(k, 0.0) == 0.0);
    CHECK(evaluate(k, -1.0) == 0.0);
}

TEST_CASE("constructor rejects malformed piece lists") {
    CHECK_THROWS_AS(SignedKernel({{0.5, 1.0, 0.1}}), std::invalid_argument);
    CHECK_THROWS_AS(SignedKernel({{0.0, 1.0, 0.1}, {1.5, 2.0, 0.1}}), std::invalid_argument);
    CHECK_THROWS_AS(SignedKernel({{0.0, 1.0, 0.1}, {1.0, 1.0, 0.1}}), std::invalid_argument);
    CHECK_THROWS_AS(SignedKernel({{0.0, 1.0, std::nan("")}}), std::invalid_argument);
    CHECK_THROWS_AS(SignedKernel({{0.0, std::numeric_limits<double>::infinity(), 0.1}}), std::invalid_argument);
}

TEST_CASE("zero kernel has no pieces and support 0") {
    const SignedKernel zero;
    CHECK(zero.is_zero());
    CHECK(zero.support_bound() == 0.0);
    const auto s = summarize(zero);
    CHECK(s.l1_positive == 0.0);
    CHECK(std::isinf(s.gamma));
    CHECK(s.subcritical);
}

TEST_CASE("positive_part clips negative pieces") {
    const auto p = positive_part(SignedKernel::constant(2.0, -0.5));
    CHECK(p.support_bound() == 2.0);
    CHECK(evaluate(p, 1.0) == 0.0);

    const SignedKernel mixed({{0.0, 1.0, 0.3}, {1.0, 2.0, -0.2}});
    const auto q = positive_part(mixed);
    CHECK(evaluate(q, 0.5) == 0.3);
    CHECK(evaluate(q, 1.5) == 0.0);
    CHECK(q.support_bound() == 2.0);

    const SignedKernel nonneg({{0.0, 1.0, 0.3}, {1.0, 2.0, 0.2}});
    const auto r = positive_part(nonneg);
    REQUIRE(r.pieces().size() == 2);
    CHECK(r.pieces()[0].value == 0.3);
    CHECK(r.pieces()[1].value == 0.2);
}

TEST_CASE("summarize computes norms, support and gamma") {
    const auto s = summarize(SignedKernel::constant(2.0, 0.25));
    CHECK(s.l1_positive == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.support_bound == 2.0);
    CHECK(s.gamma == doctest::Approx(0.0965735902799727).epsilon(1e-12));
    CHECK(s.subcritical);

    const auto m = summarize(SignedKernel({{0.0, 1.0, 0.3}, {1.0, 2.0, -0.2}}));
    CHECK(m.l1_positive == doctest::Approx(0.3));
    CHECK(m.support_bound == 2.0);
    CHECK(m.l1_total == doctest::Approx(0.5));

    // gamma uses the positive part's support: {-0.3 on (0,1], +0.4 on (1,2]}
    const auto g = summarize(SignedKernel({{0.0, 1.0, -0.3}, {1.0, 2.0, 0.4}}));
    CHECK(g.gamma == doctest::Approx((0.4 - std::log(0.4) - 1.0) / 2.0).epsilon(1e-12));

    CHECK_FALSE(summarize(SignedKernel::constant(1.0, 1.2)).subcritical);
}

TEST_CASE("gamma vanishes as the norm approaches 1") {
    CHECK(cluster_decay_rate(1.0 - 1e-6, 3.0) < 1e-11);
    CHECK(cluster_decay_rate(1.0 - 1e-3, 0.5) < 1e-5);
}

TEST_CASE("property: positive part is the pointwise maximum with zero") {
    RandomStream rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto k = random_kernel(rng);
        const auto p = positive_part(k);
        for (int i = 0; i < 50; ++i) {
            const double t = -0.5 + (k.support_bound() + 1.0) * rng.uniform();
            CHECK(evaluate(p, t) == std::max(evaluate(k, t), 0.0));
        }
    }
}

TEST_CASE("property: l1_positive matches midpoint quadrature") {
    RandomStream rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const auto k = random_kernel(rng);
        // Midpoint rule is exact per piece, so integrate piece by piece.
        double mid = 0.0;
        for (const auto& piece : k.pieces()) {
            const int n = 64;
            const double h = (piece.end - piece.start) / n;
            for (int i = 0; i < n; ++i) {
                mid += std::max(evaluate(k, piece.start + (i + 0.5) * h), 0.0) * h;
            }
        }
        CHECK(std::abs(summarize(k).l1_positive - mid) <= 1e-12);
    }
}

TEST_CASE("property: gamma decreases in the norm for fixed support") {
    for (double L : {0.5, 1.0, 2.0, 7.5}) {
        double prev = std::numeric_limits<double>::infinity();
        for (int i = 1; i < 200; ++i) {
            const double m = i / 200.0;
            const double g = cluster_decay_rate(m, L);
            CHECK(g > 0.0);
            CHECK(g < prev);
            prev = g;
        }
    }
}

TEST_CASE("property: summary invariants") {
    RandomStream rng(13);
    for (int trial = 0; trial < 300; ++trial) {
        const auto s = summarize(random_kernel(rng));
        CHECK(s.l1_positive >= 0.0);
        CHECK(s.subcritical == (s.l1_positive < 1.0));
        if (s.l1_positive > 0.0 && s.l1_positive < 1.0) {
            CHECK(s.gamma > 0.0);
        }
        CHECK(s.positive_support_bound <= s.support_bound);
    }
}
