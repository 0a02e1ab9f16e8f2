// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code is the failure count.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fgf/config.hpp"
#include "fgf/eigensolve.hpp"
#include "fgf/format.hpp"
#include "fgf/experiments.hpp"
#include "fgf/fraclap.hpp"
#include "fgf/sampler.hpp"
#include "fgf/solver.hpp"
#include "fgf/stats.hpp"

using namespace fgf;
namespace {

constexpr double kPi = std::numbers::pi;
int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
    std::printf("%-4s criterion %2d: %-34s %s  [%.2fs]\n", pass ? "PASS" : "FAIL", id,
                name.c_str(), detail.c_str(), seconds);
    if (!pass) ++g_failures;
}

template <typename F>
void criterion(int id, const std::string& name, F&& body) {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        auto [p, d] = body();
        pass = p;
        detail = d;
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(id, name, pass, detail, secs);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

ExperimentConfig config_from(const std::string& text, const std::string& out) {
    ExperimentConfig e = ExperimentConfig::from(Config::from_string(text));
    e.out_dir = out;
    return e;
}

std::filesystem::path out_root() {
    auto dir = std::filesystem::temp_directory_path() / "fgf_acceptance";
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

int main() {
    std::filesystem::remove_all(out_root());

    criterion(1, "stencil recovery", [] {
        double worst = 0;
        worst = std::max(worst, std::abs(kernel_entry({0}, 1.0, 1.0) - 2.0));
        worst = std::max(worst, std::abs(kernel_entry({1}, 1.0, 1.0) + 1.0));
        worst = std::max(worst, std::abs(kernel_entry({0, 0}, 1.0, 1.0) - 4.0));
        worst = std::max(worst, std::abs(kernel_entry({0, 1}, 1.0, 1.0) + 1.0));
        worst = std::max(worst, std::abs(kernel_entry({0}, 1.0, 2.0) - 6.0));
        worst = std::max(worst, std::abs(kernel_entry({1}, 1.0, 2.0) + 4.0));
        worst = std::max(worst, std::abs(kernel_entry({2}, 1.0, 2.0) - 1.0));
        return std::pair(worst <= 1e-10, "max dev " + fmt(worst) + " <= 1e-10");
    });

    criterion(2, "closed-form fractional kernel", [] {
        double e0 = std::abs(kernel_entry({0}, 1.0, 0.5) - 4.0 / kPi);
        double e1 = std::abs(kernel_entry({1}, 1.0, 0.5) + 4.0 / (3.0 * kPi));
        double worst = std::max(e0, e1);
        return std::pair(worst <= 1e-6, "max dev " + fmt(worst) + " <= 1e-6");
    });

    criterion(3, "commutation (discretize vs restrict)", [] {
        GaussianPair g{1, 5.0};
        PeriodicBox box(1, 0.5, 64, {-32});
        PeriodicBox doubled(1, 0.5, 128, {-64});
        double dev = commute_check(g, 1.0, box);
        double dev2 = commute_check(g, 1.0, doubled);
        bool pass = dev <= 1e-8 && dev2 <= 0.5 * dev;
        return std::pair(pass, "dev " + fmt(dev) + " <= 1e-8, doubled box " + fmt(dev2) +
                                   " <= dev/2");
    });

    criterion(4, "Poisson folding", [] {
        GaussianPair g{1, 0.5};
        PeriodicBox box(1, 0.5, 64, {-32});
        double dev = poisson_fold_check(g, box, 3);
        return std::pair(dev <= 1e-8, "dev " + fmt(dev) + " <= 1e-8");
    });

    criterion(5, "error-estimate convergence rate", [] {
        std::string detail;
        bool pass = true;
        for (double s : {0.75, 1.5}) {
            ExperimentConfig cfg = config_from(
                "experiment = converge\ndomain = box(0,1)\ns = " + format_double(s) +
                    "\nh = 0.0625,0.03125,0.015625,0.0078125\n",
                (out_root() / ("conv" + fmt(s))).string());
            ConvergeResult r = run_converge(cfg);
            pass = pass && r.ls_order >= 1.7;
            detail += "s=" + fmt(s) + " order " + fmt(r.ls_order) + " ";
        }
        return std::pair(pass, detail + ">= 1.7");
    });

    criterion(6, "variance convergence + exact 1/12", [] {
        ExperimentConfig cfg = config_from(
            "experiment = variance\ndomain = box(0,1)\ns = 0.75\n"
            "h = 0.125,0.0625,0.03125,0.015625,0.0078125\nreplicas = 64\nseed = 2\n",
            (out_root() / "var").string());
        VarianceResult r = run_variance(cfg);
        bool monotone = true;
        for (size_t i = 2; i < r.cauchy.size(); ++i)
            monotone = monotone && r.cauchy[i] < r.cauchy[i - 1];

        ExperimentConfig exact = config_from(
            "experiment = variance\ndomain = box(0,1)\ns = 1\nh = 0.125,0.0625\n"
            "replicas = 8\nrhs = const\n",
            (out_root() / "var112").string());
        VarianceResult rx = run_variance(exact);
        double dev = std::abs(rx.richardson - 1.0 / 12.0);
        bool pass = monotone && dev <= 1e-12;
        return std::pair(pass, std::string("Cauchy decreasing=") + (monotone ? "yes" : "no") +
                                   ", |V_ref - 1/12| = " + fmt(dev) + " <= 1e-12");
    });

    criterion(7, "sampler law (variance identity)", [] {
        DomainPtr single = build_domain(parse_shape("box(0,1)"), 0.5);
        KernelMatrix A1 = assemble_matrix(single, 1.0);
        PrecisionOperator P1(A1);
        double exact_dev = std::abs(analytic_covariance(P1)(0, 0) - 0.25);

        const int N = 20000;
        FieldEnsemble e1 = ensemble(P1, 42, N);
        double m2 = 0;
        for (const auto& phi : e1.samples) m2 += phi[0] * phi[0];
        m2 /= N;
        double se1 = 0.25 * std::sqrt(2.0 / (N - 1));
        bool single_ok = exact_dev <= 1e-12 && std::abs(m2 - 0.25) <= 5.0 * se1;

        DomainPtr grid = build_domain(parse_shape("box(0,1,0,1)"), 1.0 / 6);
        KernelMatrix A2 = assemble_matrix(grid, 1.0);
        PrecisionOperator P2(A2);
        Eigen::MatrixXd C = analytic_covariance(P2);
        FieldEnsemble e2 = ensemble(P2, 4242, N, 4, true);
        double worst_z = 0;
        for (int i = 0; i < C.rows(); ++i)
            for (int j = 0; j < C.cols(); ++j) {
                double se = std::sqrt((C(i, i) * C(j, j) + C(i, j) * C(i, j)) / N);
                worst_z = std::max(worst_z, std::abs(e2.covariance(i, j) - C(i, j)) / se);
            }
        bool pass = single_ok && worst_z <= 5.0;
        return std::pair(pass, "single-site exact dev " + fmt(exact_dev) + ", empirical z " +
                                   fmt(std::abs(m2 - 0.25) / se1) + ", 5x5 grid max z " +
                                   fmt(worst_z) + " <= 5");
    });

    criterion(8, "eigen-sampler equivalence", [] {
        DomainPtr dom = build_domain(parse_shape("box(0,1)"), 1.0 / 21);
        KernelMatrix A = assemble_matrix(dom, 1.5);
        SpectralDecomposition dec = decompose(A);
        Eigen::MatrixXd series = series_covariance(dec);
        Eigen::MatrixXd direct =
            PrecisionOperator(A).cholesky().solve(Eigen::MatrixXd::Identity(20, 20));
        double dev = (series - direct).cwiseAbs().maxCoeff();
        return std::pair(dev <= 1e-8, "20-site max entry dev " + fmt(dev) + " <= 1e-8");
    });

    criterion(9, "Weyl exponent window fits", [] {
        struct Case {
            const char* domain;
            double h, s, target;
        };
        std::vector<Case> cases = {{"box(0,1)", 1.0 / 101, 1.0, 2.0},
                                   {"box(0,1)", 1.0 / 101, 2.0, 4.0},
                                   {"box(0,1,0,1)", 1.0 / 32, 1.0, 1.0}};
        bool pass = true;
        std::string detail;
        for (const auto& c : cases) {
            KernelMatrix A = assemble_matrix(build_domain(parse_shape(c.domain), c.h), c.s);
            double fit = weyl_fit(decompose(A));
            pass = pass && fit >= 0.8 * c.target && fit <= 1.2 * c.target;
            detail += fmt(fit) + "/" + fmt(c.target) + " ";
        }
        return std::pair(pass, detail + "within 20%");
    });

    criterion(10, "maximum convergence (KS)", [] {
        ExperimentConfig cfg = config_from(
            "experiment = maxstat\ndomain = box(0,1)\ns = 1.5\nh = 0.0625,0.03125,0.015625\n"
            "replicas = 5000\nseed = 1\nthreads = 4\n",
            (out_root() / "maxstat").string());
        MaxStatResult r = run_maxstat(cfg);
        double ks1 = r.ks_prev[1], ks2 = r.ks_prev[2];
        bool pass = ks2 <= 0.05 && ks2 <= ks1 + 0.01;
        return std::pair(pass, "KS " + fmt(ks1) + " -> " + fmt(ks2) +
                                   " (finest <= 0.05, non-increasing +0.01)");
    });

    criterion(11, "discrete Poincare bound", [] {
        ShapePtr shape = parse_shape("box(0,1)");
        bool pass = true;
        std::string detail;
        for (double s : {0.5, 1.0, 1.5}) {
            double coarse = 0, worst = 0;
            for (int lev = 0; lev < 4; ++lev) {
                double h = 1.0 / (8 << lev);
                DomainPtr dom = build_domain(shape, h);
                KernelMatrix A = assemble_matrix(dom, s);
                double cmax = 0;
                for (int t = 0; t < 200; ++t) {
                    RngSpec rng(7, 1000 * lev + t);
                    Eigen::VectorXd v(dom->site_count());
                    for (int i = 0; i < v.size(); ++i) v[i] = rng.normal();
                    double l2 = std::sqrt(h * v.squaredNorm());
                    double hs = std::sqrt(h * v.dot(A.matrix() * v));
                    cmax = std::max(cmax, l2 / hs);
                }
                if (lev == 0)
                    coarse = cmax;
                else
                    worst = std::max(worst, cmax / coarse);
            }
            pass = pass && worst <= 1.1;
            detail += "s=" + fmt(s) + " ratio " + fmt(worst) + " ";
        }
        return std::pair(pass, detail + "<= 1.1x coarsest");
    });

    criterion(12, "determinism across runs and threads", [] {
        const std::string maxstat_cfg =
            "experiment = maxstat\ndomain = box(0,1)\ns = 1.5\nh = 0.25,0.125\n"
            "replicas = 400\nseed = 5\n";
        std::vector<std::string> outputs;
        for (int threads : {1, 2, 8, 1}) {
            ExperimentConfig e = ExperimentConfig::from(Config::from_string(maxstat_cfg));
            e.out_dir = (out_root() / ("det_t" + std::to_string(threads) + "_" +
                                       std::to_string(outputs.size())))
                            .string();
            e.threads = threads;
            MaxStatResult r = run_maxstat(e);
            outputs.push_back(slurp(r.csv_path));
        }
        bool maxstat_same = outputs[1] == outputs[0] && outputs[2] == outputs[0] &&
                            outputs[3] == outputs[0];

        auto run_twice = [](const std::string& text, auto&& runner) {
            ExperimentConfig a = ExperimentConfig::from(Config::from_string(text));
            a.out_dir = (out_root() / ("rr" + std::to_string(std::hash<std::string>{}(text) % 997) +
                                       "a"))
                            .string();
            ExperimentConfig b = a;
            b.out_dir = a.out_dir + "b";
            return slurp(runner(a)) == slurp(runner(b));
        };
        bool conv_same = run_twice(
            "experiment = converge\ndomain = box(0,1)\ns = 0.75\nh = 0.125,0.0625\n",
            [](const ExperimentConfig& c) { return run_converge(c).csv_path; });
        bool spec_same = run_twice(
            "experiment = spectrum\ndomain = box(0,1)\ns = 1\nh = 0.02\n",
            [](const ExperimentConfig& c) { return run_spectrum(c).csv_path; });
        bool sample_same = run_twice(
            "experiment = sample\ndomain = box(0,1,0,1)\ns = 1\nh = 0.2\nreplicas = 3\nseed = 9\n",
            [](const ExperimentConfig& c) { return run_sample(c).field_paths.front(); });

        // variance exercises the Monte Carlo path, so vary the thread count
        std::vector<std::string> var_out;
        for (int threads : {1, 8}) {
            ExperimentConfig e = ExperimentConfig::from(Config::from_string(
                "experiment = variance\ndomain = box(0,1)\ns = 1\nh = 0.25,0.125\n"
                "replicas = 32\n"));
            e.out_dir = (out_root() / ("vart" + std::to_string(threads))).string();
            e.threads = threads;
            var_out.push_back(slurp(run_variance(e).csv_path));
        }
        bool var_same = var_out[0] == var_out[1];

        bool pass = maxstat_same && conv_same && var_same && spec_same && sample_same;
        std::string detail = std::string("maxstat(1/2/8 threads + rerun)=") +
                             (maxstat_same ? "same" : "DIFF") + " converge=" +
                             (conv_same ? "same" : "DIFF") + " variance(1/8 threads)=" +
                             (var_same ? "same" : "DIFF") + " spectrum=" +
                             (spec_same ? "same" : "DIFF") + " sample=" +
                             (sample_same ? "same" : "DIFF");
        return std::pair(pass, detail);
    });

    if (g_failures == 0)
        std::printf("acceptance: all 12 criteria passed\n");
    else
        std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
    return g_failures;
}
