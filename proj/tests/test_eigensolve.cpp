#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "fgf/eigensolve.hpp"
#include "fgf/error.hpp"
#include "fgf/sampler.hpp"
#include "fgf/stats.hpp"

using namespace fgf;
namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("single-site decomposition") {
    DomainPtr dom = build_domain(parse_shape("box(0,1)"), 0.5);
    KernelMatrix A = assemble_matrix(dom, 1.0);
    SpectralDecomposition dec = decompose(A);
    REQUIRE(dec.eigenvalues.size() == 1);
    CHECK(dec.eigenvalues[0] == doctest::Approx(8.0).epsilon(1e-13));
    CHECK(std::abs(dec.eigenvectors(0, 0)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
}

TEST_CASE("tridiagonal spectrum matches the closed form") {
    const int n = 31;
    double h = 1.0 / (n + 1);
    DomainPtr dom = build_domain(parse_shape("box(0,1)"), h);
    REQUIRE(dom->site_count() == n);
    KernelMatrix A = assemble_matrix(dom, 1.0);
    SpectralDecomposition dec = decompose(A);
    for (int j = 1; j <= n; ++j) {
        double lam = (2.0 - 2.0 * std::cos(j * kPi * h)) / (h * h);
        CHECK(dec.eigenvalues[j - 1] == doctest::Approx(lam).epsilon(1e-11));
    }
}

TEST_CASE("trace identity and L2h orthonormality") {
    DomainPtr dom = build_domain(parse_shape("box(0,1)"), 1.0 / 20);
    KernelMatrix A = assemble_matrix(dom, 0.75);
    SpectralDecomposition dec = decompose(A);
    CHECK(dec.eigenvalues.sum() == doctest::Approx(A.matrix().trace()).epsilon(1e-9));

    double hd = dom->spacing();
    Eigen::MatrixXd gram = hd * dec.eigenvectors.transpose() * dec.eigenvectors;
    CHECK((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() <=
          1e-10);
}

TEST_CASE("series covariance equals the inverse precision") {
    DomainPtr dom = build_domain(parse_shape("box(0,1)"), 1.0 / 21.0);
    REQUIRE(dom->site_count() == 20);
    KernelMatrix A = assemble_matrix(dom, 1.5);
    SpectralDecomposition dec = decompose(A);
    Eigen::MatrixXd series = series_covariance(dec);
    Eigen::MatrixXd direct = (dom->spacing() * A.matrix()).inverse();
    CHECK((series - direct).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("rank-1 truncation gives the top-mode covariance") {
    DomainPtr dom = build_domain(parse_shape("box(0,1)"), 0.2);
    KernelMatrix A = assemble_matrix(dom, 1.0);
    SpectralDecomposition dec = decompose(A);
    Eigen::VectorXd v = dec.eigenvectors.col(0);
    Eigen::MatrixXd rank1 = v * v.transpose() / dec.eigenvalues[0];
    // covariance of X λ1^{-1/2} v1
    const int N = 4000;
    Eigen::MatrixXd emp = Eigen::MatrixXd::Zero(v.size(), v.size());
    for (int r = 0; r < N; ++r) {
        RngSpec rng(5, r);
        Eigen::VectorXd phi = rng.normal() / std::sqrt(dec.eigenvalues[0]) * v;
        emp += phi * phi.transpose();
    }
    emp /= N;
    CHECK((emp - rank1).cwiseAbs().maxCoeff() <= 5.0 * rank1.cwiseAbs().maxCoeff() / std::sqrt(N));
}

TEST_CASE("series sampler variance matches the precision sampler on one site") {
    DomainPtr dom = build_domain(parse_shape("box(0,1)"), 0.5);
    KernelMatrix A = assemble_matrix(dom, 1.0);
    SpectralDecomposition dec = decompose(A);
    const int N = 20000;
    double m2 = 0;
    for (int r = 0; r < N; ++r) {
        GridFunction phi = series_sample(dec, RngSpec(77, r));
        m2 += phi.values[0] * phi.values[0];
    }
    m2 /= N;
    CHECK(std::abs(m2 - 0.25) <= 5.0 * 0.25 * std::sqrt(2.0 / (N - 1)));
}

TEST_CASE("series and precision samplers agree in distribution") {
    DomainPtr dom = build_domain(parse_shape("box(0,1)"), 1.0 / 12);
    KernelMatrix A = assemble_matrix(dom, 1.0);
    SpectralDecomposition dec = decompose(A);
    PrecisionOperator P(A);
    const int N = 5000;
    int site = dom->site_count() / 2;
    std::vector<double> a, b;
    for (int r = 0; r < N; ++r) {
        a.push_back(series_sample(dec, RngSpec(91, r)).values[site]);
        b.push_back(sample(P, RngSpec(92, r)).values[site]);
    }
    CHECK(ks_distance(a, b) <= 0.03);
}

TEST_CASE("restriction breaks the semigroup: (A_{1/2})^2 != A_1 on a domain") {
    DomainPtr dom = build_domain(parse_shape("box(0,1)"), 0.25);
    REQUIRE(dom->site_count() == 3);
    KernelMatrix Ahalf = assemble_matrix(dom, 0.5);
    KernelMatrix Aone = assemble_matrix(dom, 1.0);
    double gap = (Ahalf.matrix() * Ahalf.matrix() - Aone.matrix()).norm();
    CHECK(gap > 1.0);  // visibly nonzero, not a rounding artifact
}

TEST_CASE("weyl exponent fits for the acceptance triples") {
    {
        DomainPtr dom = build_domain(parse_shape("box(0,1)"), 1.0 / 101);
        KernelMatrix A = assemble_matrix(dom, 1.0);
        double fit = weyl_fit(decompose(A));
        CHECK(fit >= 0.8 * 2.0);
        CHECK(fit <= 1.2 * 2.0);
    }
    {
        DomainPtr dom = build_domain(parse_shape("box(0,1)"), 1.0 / 101);
        KernelMatrix A = assemble_matrix(dom, 2.0);
        double fit = weyl_fit(decompose(A));
        CHECK(fit >= 0.8 * 4.0);
        CHECK(fit <= 1.2 * 4.0);
    }
    {
        DomainPtr dom = build_domain(parse_shape("box(0,1,0,1)"), 1.0 / 32);
        REQUIRE(dom->site_count() == 31 * 31);
        KernelMatrix A = assemble_matrix(dom, 1.0);
        double fit = weyl_fit(decompose(A));
        CHECK(fit >= 0.8);
        CHECK(fit <= 1.2);
    }
}

TEST_CASE("weyl_fit needs enough modes") {
    DomainPtr dom = build_domain(parse_shape("box(0,1)"), 0.1);
    KernelMatrix A = assemble_matrix(dom, 1.0);
    CHECK_THROWS_AS(weyl_fit(decompose(A)), Error);
}
