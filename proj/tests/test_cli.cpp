#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fgf/config.hpp"
#include "fgf/experiments.hpp"
#include "fgf/fraclap.hpp"
#include "fgf/sampler.hpp"

using namespace fgf;

namespace {
std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE(is);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

std::filesystem::path fresh_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("fgf_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}
}  // namespace

TEST_CASE("config parsing: comments, trimming, overrides, errors") {
    Config cfg = Config::from_string("# comment\n s = 1.5 \nh = 0.25, 0.125\nseed=9\n");
    CHECK(cfg.get_double("s", 0) == 1.5);
    CHECK(cfg.get_double_list("h", {}) == std::vector<double>{0.25, 0.125});
    CHECK(cfg.get_u64("seed", 0) == 9);
    CHECK(cfg.get_string("missing", "fallback") == "fallback");
    cfg.set("s", "2.0");
    CHECK(cfg.get_double("s", 0) == 2.0);

    CHECK_THROWS_AS(Config::from_string("not an assignment\n"), ConfigError);
    CHECK_THROWS_AS(Config::from_string("s = abc\n").get_double("s", 0), ConfigError);
}

TEST_CASE("semantic hash ignores out and threads") {
    Config a = Config::from_string("s = 1\nthreads = 1\nout = /tmp/a\n");
    Config b = Config::from_string("s = 1\nthreads = 8\nout = /tmp/b\n");
    Config c = Config::from_string("s = 2\n");
    CHECK(a.semantic_hash() == b.semantic_hash());
    CHECK(a.semantic_hash() != c.semantic_hash());
}

TEST_CASE("experiment config validation") {
    Config good = Config::from_string(
        "experiment = maxstat\ndomain = box(0,1)\ns = 1.5\nh = 0.125,0.0625\nreplicas = 10\n");
    ExperimentConfig e = ExperimentConfig::from(good);
    CHECK(e.kind == ExperimentKind::MaxStat);
    CHECK(e.h_list.size() == 2);

    // d >= 2s violates the subcritical hypothesis
    Config bad = Config::from_string(
        "experiment = maxstat\ndomain = box(0,1)\ns = 0.5\nh = 0.125\nreplicas = 10\n");
    CHECK_THROWS_WITH_AS(ExperimentConfig::from(bad), doctest::Contains("subcritical"),
                         ConfigError);

    Config increasing = Config::from_string(
        "experiment = converge\ndomain = box(0,1)\ns = 1\nh = 0.0625,0.125\n");
    CHECK_THROWS_WITH_AS(ExperimentConfig::from(increasing), doctest::Contains("decreasing"),
                         ConfigError);

    Config badtheta = Config::from_string(
        "experiment = variance\ndomain = box(0,1)\ns = 3\nh = 0.125\ntheta_order = 2\n");
    CHECK_THROWS_WITH_AS(ExperimentConfig::from(badtheta), doctest::Contains("theta_order"),
                         ConfigError);

    Config badshape = Config::from_string("experiment = selftest\ndomain = blob(1)\n");
    CHECK_THROWS_AS(ExperimentConfig::from(badshape), ConfigError);
}

TEST_CASE("selftest runs all checks green and reports at least eight") {
    Config cfg = Config::from_string("experiment = selftest\n");
    SelfTestResult r = run_selftest(ExperimentConfig::from(cfg));
    CHECK(r.checks.size() >= 8);
    CHECK(r.all_pass);
}

TEST_CASE("corrupted kernel quadrature fails the closed-form selftest check") {
    Config cfg = Config::from_string("experiment = selftest\nq = 1\n");
    SelfTestResult r = run_selftest(ExperimentConfig::from(cfg));
    bool found = false;
    for (const auto& c : r.checks)
        if (c.name == "kernel_s_half_closed_form") {
            found = true;
            CHECK_FALSE(c.pass);
            CHECK(c.measured > c.threshold);
        }
    CHECK(found);
    CHECK_FALSE(r.all_pass);
}

TEST_CASE("spectrum experiment writes the eigenvalue table with a fit") {
    auto dir = fresh_dir("spectrum");
    Config cfg = Config::from_string("experiment = spectrum\ndomain = box(0,1)\ns = 1\nh = " +
                                     std::string("0.00990099009900990099\n"));
    ExperimentConfig e = ExperimentConfig::from(cfg);
    e.out_dir = dir.string();
    SpectrumResult r = run_spectrum(e);
    CHECK(r.eigenvalues.size() == 100);
    CHECK(r.weyl_target == 2.0);
    std::string csv = slurp(r.csv_path);
    CHECK(csv.find("j,lambda") != std::string::npos);
    CHECK(csv.find("# weyl_exponent=") != std::string::npos);
}

TEST_CASE("experiments are byte-identical across reruns and thread counts") {
    auto dir1 = fresh_dir("det1");
    auto dir2 = fresh_dir("det2");
    Config base = Config::from_string(
        "experiment = maxstat\ndomain = box(0,1)\ns = 1.5\nh = 0.25,0.125\nreplicas = 400\n"
        "seed = 5\n");
    ExperimentConfig e1 = ExperimentConfig::from(base);
    e1.out_dir = dir1.string();
    e1.threads = 1;
    ExperimentConfig e2 = ExperimentConfig::from(base);
    e2.out_dir = dir2.string();
    e2.threads = 8;
    MaxStatResult r1 = run_maxstat(e1);
    MaxStatResult r2 = run_maxstat(e2);
    CHECK(slurp(r1.csv_path) == slurp(r2.csv_path));

    auto dir3 = fresh_dir("det3");
    ExperimentConfig e3 = ExperimentConfig::from(base);
    e3.out_dir = dir3.string();
    e3.threads = 2;
    MaxStatResult r3 = run_maxstat(e3);
    CHECK(slurp(r1.csv_path) == slurp(r3.csv_path));
}

TEST_CASE("sample experiment dumps fields deterministically") {
    auto dir1 = fresh_dir("sample1");
    Config cfg = Config::from_string(
        "experiment = sample\ndomain = box(0,1,0,1)\ns_list = 0,2\nh = 0.125\nreplicas = 2\n"
        "seed = 3\nheightmap = 1\n");
    ExperimentConfig e = ExperimentConfig::from(cfg);
    e.out_dir = dir1.string();
    SampleResult r = run_sample(e);
    CHECK(r.field_paths.size() == 8);  // 2 s-values x 2 replicas x (txt + mat)
    CHECK(r.heightmap_paths.size() == 4);
    for (const auto& p : r.field_paths) CHECK(std::filesystem::exists(p));

    auto dir2 = fresh_dir("sample2");
    ExperimentConfig e2 = ExperimentConfig::from(cfg);
    e2.out_dir = dir2.string();
    SampleResult r2 = run_sample(e2);
    for (size_t i = 0; i < r.field_paths.size(); ++i)
        CHECK(slurp(r.field_paths[i]) == slurp(r2.field_paths[i]));
}

TEST_CASE("white-noise fields at s=0 have vanishing lag-1 autocorrelation") {
    Config cfg = Config::from_string(
        "experiment = sample\ndomain = box(0,1,0,1)\ns = 0\nh = 0.05\nreplicas = 50\nseed = 21\n");
    ExperimentConfig e = ExperimentConfig::from(cfg);
    DomainPtr dom = build_domain(parse_shape(e.domain_spec), 0.05);
    KernelMatrix A = assemble_matrix(dom, 0.0);
    PrecisionOperator P(A);
    // precision of white noise is h^d I
    CHECK((P.matrix() - 0.05 * 0.05 * Eigen::MatrixXd::Identity(dom->site_count(),
                                                                dom->site_count()))
              .cwiseAbs()
              .maxCoeff() <= 1e-12);
    FieldEnsemble ens = ensemble(P, e.seed, e.replicas);
    double num = 0, den = 0;
    long pairs = 0;
    for (const auto& phi : ens.samples) {
        for (int i = 0; i + 1 < phi.size(); ++i) {
            num += phi[i] * phi[i + 1];
            ++pairs;
        }
        den += phi.squaredNorm();
    }
    double rho = num / den;
    CHECK(std::abs(rho) <= 2.0 / std::sqrt(static_cast<double>(pairs)));
}

TEST_CASE("degenerate configs: single h and single replica") {
    auto dir = fresh_dir("degen");
    Config conv = Config::from_string(
        "experiment = converge\ndomain = box(0,1)\ns = 1\nh = 0.125\n");
    ExperimentConfig e = ExperimentConfig::from(conv);
    e.out_dir = dir.string();
    ConvergeResult r = run_converge(e);
    CHECK(r.h.size() == 1);
    CHECK(r.pair_order.empty());
    CHECK(slurp(r.csv_path).find("least_squares_order") == std::string::npos);

    Config ms = Config::from_string(
        "experiment = maxstat\ndomain = box(0,1)\ns = 1.5\nh = 0.25\nreplicas = 1\n");
    ExperimentConfig e2 = ExperimentConfig::from(ms);
    e2.out_dir = (dir / "ms").string();
    MaxStatResult r2 = run_maxstat(e2);
    CHECK(r2.maxima.size() == 1);
    CHECK(r2.maxima[0].size() == 1);
}

TEST_CASE("variance experiment with zero right-hand side is identically zero") {
    auto dir = fresh_dir("varzero");
    Config cfg = Config::from_string(
        "experiment = variance\ndomain = box(0,1)\ns = 0.75\nh = 0.25,0.125\nreplicas = 16\n"
        "rhs = zero\n");
    ExperimentConfig e = ExperimentConfig::from(cfg);
    e.out_dir = dir.string();
    VarianceResult r = run_variance(e);
    for (double v : r.value) CHECK(v == 0.0);
    for (double v : r.empirical_var) CHECK(v == 0.0);
}

TEST_CASE("spectrum experiment can dump eigenvectors") {
    auto dir = fresh_dir("specvec");
    Config cfg = Config::from_string(
        "experiment = spectrum\ndomain = box(0,1)\ns = 1\nh = 0.02\nvectors = 1\n");
    ExperimentConfig e = ExperimentConfig::from(cfg);
    e.out_dir = dir.string();
    run_spectrum(e);
    CHECK(std::filesystem::exists(dir / "eigenvectors.txt"));
}

TEST_CASE("sample experiment writes the covariance CSV on small grids") {
    auto dir = fresh_dir("samplecov");
    Config cfg = Config::from_string(
        "experiment = sample\ndomain = box(0,1,0,1)\ns = 1\nh = 0.2\nreplicas = 64\nseed = 8\n");
    ExperimentConfig e = ExperimentConfig::from(cfg);
    e.out_dir = dir.string();
    SampleResult r = run_sample(e);
    REQUIRE(r.covariance_paths.size() == 1);
    std::string csv = slurp(r.covariance_paths[0]);
    CHECK(csv.find("empirical covariance") != std::string::npos);
}

TEST_CASE("variance experiment: exact 1/12 reference for s=1, f=1") {
    auto dir = fresh_dir("var112");
    Config cfg = Config::from_string(
        "experiment = variance\ndomain = box(0,1)\ns = 1\nh = 0.125,0.0625\nreplicas = 50\n"
        "rhs = const\n");
    ExperimentConfig e = ExperimentConfig::from(cfg);
    e.out_dir = dir.string();
    VarianceResult r = run_variance(e);
    for (size_t i = 0; i < r.h.size(); ++i) {
        double h = r.h[i];
        CHECK(r.value[i] == doctest::Approx(1.0 / 12.0 - h * h / 12.0).epsilon(1e-12));
    }
    CHECK(r.richardson == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
}
