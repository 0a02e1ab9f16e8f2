#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fgf/error.hpp"
#include "fgf/rng.hpp"
#include "fgf/stats.hpp"

using namespace fgf;

TEST_CASE("ks distance: identical samples, ties, disjoint supports") {
    std::vector<double> a{1.0, 2.0, 3.0};
    CHECK(ks_distance(a, a) == 0.0);

    std::vector<double> tied{1.0, 1.0, 2.0, 2.0};
    CHECK(ks_distance(tied, tied) == 0.0);

    std::vector<double> lo{0.0, 0.1, 0.2};
    std::vector<double> hi{5.0, 5.1, 5.2};
    CHECK(ks_distance(lo, hi) == 1.0);

    std::vector<double> half{1.0, 1.0, 9.0, 9.0};
    std::vector<double> all_low{1.0, 1.0, 1.0, 1.0};
    CHECK(ks_distance(half, all_low) == doctest::Approx(0.5));

    CHECK_THROWS_AS(ks_distance({}, a), Error);
}

TEST_CASE("ks distance of two draws from one distribution is small") {
    RngSpec r1(3, 0), r2(3, 1);
    std::vector<double> a, b;
    for (int i = 0; i < 4000; ++i) {
        a.push_back(r1.normal());
        b.push_back(r2.normal());
    }
    CHECK(ks_distance(a, b) < 0.05);
}

TEST_CASE("one-sample ks p-value calibrates against the normal") {
    RngSpec rng(17, 5);
    std::vector<double> a;
    for (int i = 0; i < 2000; ++i) a.push_back(rng.normal());
    CHECK(ks_one_sample_pvalue(a, [](double x) { return normal_cdf(x); }) > 0.01);
    // grossly wrong scale must be rejected
    CHECK(ks_one_sample_pvalue(a, [](double x) { return normal_cdf(x / 3.0); }) < 1e-6);
}

TEST_CASE("kolmogorov tail function") {
    CHECK(kolmogorov_q(0.0) == 1.0);
    CHECK(kolmogorov_q(10.0) < 1e-12);
    CHECK(kolmogorov_q(0.5) > kolmogorov_q(1.0));
    // classical reference value Q(1) ~ 0.26999967
    CHECK(kolmogorov_q(1.0) == doctest::Approx(0.26999967).epsilon(1e-6));
}

TEST_CASE("quantiles interpolate order statistics") {
    std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    CHECK(quantile_sorted(v, 0.0) == 1.0);
    CHECK(quantile_sorted(v, 1.0) == 4.0);
    CHECK(quantile_sorted(v, 0.5) == doctest::Approx(2.5));
    std::vector<double> one{7.0};
    CHECK(quantile_sorted(one, 0.3) == 7.0);
}

TEST_CASE("inverse normal CDF round-trips through the CDF") {
    for (double p : {1e-10, 1e-4, 0.2, 0.5, 0.9, 1.0 - 1e-6}) {
        double x = inverse_normal_cdf(p);
        CHECK(normal_cdf(x) == doctest::Approx(p).epsilon(1e-12));
    }
    CHECK(inverse_normal_cdf(0.5) == 0.0);
    CHECK_THROWS_AS(inverse_normal_cdf(0.0), Error);
    CHECK_THROWS_AS(inverse_normal_cdf(1.0), Error);
}

TEST_CASE("replica streams decorrelate and reproduce") {
    RngSpec a(123, 7), b(123, 7), c(123, 8);
    double corr = 0;
    for (int i = 0; i < 1000; ++i) {
        double xa = a.normal(), xb = b.normal(), xc = c.normal();
        CHECK(xa == xb);
        corr += xa * xc;
    }
    CHECK(std::abs(corr / 1000.0) < 0.1);
}

TEST_CASE("least-squares slope recovers an exact line") {
    std::vector<double> x{1, 2, 3, 4, 5}, y;
    for (double v : x) y.push_back(-2.5 * v + 1.0);
    CHECK(ls_slope(x, y) == doctest::Approx(-2.5).epsilon(1e-13));
}
