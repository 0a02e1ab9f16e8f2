#include "fgf/experiments.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "fgf/eigensolve.hpp"
#include "fgf/error.hpp"
#include "fgf/format.hpp"
#include "fgf/fraclap.hpp"
#include "fgf/mollify.hpp"
#include "fgf/sampler.hpp"
#include "fgf/solver.hpp"
#include "fgf/stats.hpp"

namespace fgf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr const char* kArtifactVersion = "fgf-artifact v1";

std::ofstream open_csv(const ExperimentConfig& cfg, const std::string& name,
                       std::string& path_out) {
    std::filesystem::create_directories(cfg.out_dir);
    path_out = (std::filesystem::path(cfg.out_dir) / name).string();
    std::ofstream os(path_out, std::ios::binary);  // binary: byte-stable newlines
    if (!os) throw Error("cannot open output file " + path_out);
    os << "# " << kArtifactVersion << " config=" << cfg.to_config().semantic_hash() << "\n";
    return os;
}

struct Window {
    std::vector<double> center, halfwidth;
};

Window domain_window(const LatticeDomain& dom, double halfwidth_factor = 0.4) {
    Window w;
    int d = dom.dim();
    w.center.resize(d);
    w.halfwidth.resize(d);
    for (int a = 0; a < d; ++a) {
        double lo = dom.spacing() * dom.bbox_lo()[a];
        double hi = dom.spacing() * dom.bbox_hi()[a];
        w.center[a] = 0.5 * (lo + hi);
        w.halfwidth[a] = halfwidth_factor * (hi - lo + 2 * dom.spacing());
    }
    return w;
}

GridFunction constant_rhs_times_theta(DomainPtr dom) {
    // Θ_h * 1 == 1 for an integral-one mollifier.
    GridFunction g = GridFunction::zero(dom);
    g.values.setOnes();
    return g;
}

}  // namespace

double window_bump(std::span<const double> x, std::span<const double> center,
                   std::span<const double> halfwidth, int power) {
    double v = 1;
    for (size_t a = 0; a < x.size(); ++a) {
        double t = (x[a] - center[a]) / halfwidth[a];
        if (std::abs(t) >= 1.0) return 0.0;
        v *= std::pow(std::cos(0.5 * kPi * t), power);
    }
    return v;
}

BoxPtr make_fine_box(const LatticeDomain& dom, double h_min, double ratio, double pad) {
    int d = dom.dim();
    double delta = h_min / ratio;
    double diam = 0;
    for (int a = 0; a < d; ++a)
        diam = std::max(diam, dom.spacing() * (dom.bbox_hi()[a] - dom.bbox_lo()[a] + 2));
    long n = 2 * static_cast<long>(std::ceil(pad * diam / (2 * delta)));
    std::vector<int> origin(d);
    for (int a = 0; a < d; ++a) {
        double c = 0.5 * dom.spacing() * (dom.bbox_lo()[a] + dom.bbox_hi()[a]);
        origin[a] = static_cast<int>(std::lround(c / delta)) - static_cast<int>(n / 2);
    }
    return std::make_shared<PeriodicBox>(d, delta, static_cast<int>(n), std::move(origin));
}

BoxFunction manufactured_u(const LatticeDomain& dom, BoxPtr box) {
    Window w = domain_window(dom);
    BoxFunction u = BoxFunction::zero(box);
    for (long i = 0; i < box->site_count(); ++i) {
        std::vector<double> x = box->coordinate(i);
        u.values[i] = window_bump(x, w.center, w.halfwidth);
    }
    return u;
}

ConvergeResult run_converge(const ExperimentConfig& cfg) {
    ShapePtr shape = parse_shape(cfg.domain_spec);
    double h_min = cfg.h_list.back();
    DomainPtr hint = build_domain(shape, cfg.h_list.front());

    const double fine_ratio = 16.0, fine_pad = 16.0;
    BoxPtr fine = make_fine_box(*hint, h_min, fine_ratio, fine_pad);
    BoxFunction u_ref = manufactured_u(*hint, fine);
    BoxFunction f_ref = apply_continuous_reference(u_ref, cfg.s);

    ConvergeResult res;
    std::string path;
    std::ofstream os = open_csv(cfg, "converge.csv", path);
    res.csv_path = path;
    os << "h,error,order\n";

    for (double h : cfg.h_list) {
        DomainPtr dom = build_domain(shape, h);
        Mollifier theta_big = Mollifier::bspline(cfg.theta_order, dom->dim(), h);
        GridFunction rhs = mollify_convolve(f_ref, theta_big, dom);
        KernelMatrix A = assemble_matrix(dom, cfg.s, cfg.quadrature_q);
        GridFunction u_h = solve_dirichlet({&A, rhs});
        Mollifier theta_small = Mollifier::bump(dom->dim(), h);
        ErrorFunctionalOptions opt;
        opt.oversampling = cfg.oversampling;
        opt.pad_factor = cfg.pad_factor;
        double err = error_functional(u_ref, u_h, theta_small, cfg.s, opt);
        res.h.push_back(h);
        res.error.push_back(err);
        double order = 0;
        if (res.h.size() > 1) {
            size_t i = res.h.size() - 1;
            order = std::log(res.error[i - 1] / res.error[i]) / std::log(res.h[i - 1] / res.h[i]);
            res.pair_order.push_back(order);
        }
        os << format_double(h) << "," << format_double(err) << ","
           << (res.h.size() > 1 ? format_double(order) : "") << "\n";
    }
    if (res.h.size() > 1) {
        std::vector<double> lx, ly;
        for (size_t i = 0; i < res.h.size(); ++i) {
            lx.push_back(std::log(res.h[i]));
            ly.push_back(std::log(res.error[i]));
        }
        res.ls_order = ls_slope(lx, ly);
        os << "# least_squares_order=" << format_double(res.ls_order) << "\n";
    }
    return res;
}

VarianceResult run_variance(const ExperimentConfig& cfg) {
    ShapePtr shape = parse_shape(cfg.domain_spec);
    double h_min = cfg.h_list.back();
    DomainPtr hint = build_domain(shape, cfg.h_list.front());
    const bool bump_rhs = cfg.rhs_kind == "bump";

    const double fine_ratio = 16.0, fine_pad = 8.0;
    BoxPtr fine;
    BoxFunction f_ref;
    Window w = domain_window(*hint);
    if (bump_rhs) {
        fine = make_fine_box(*hint, h_min, fine_ratio, fine_pad);
        f_ref = BoxFunction::zero(fine);
        for (long i = 0; i < fine->site_count(); ++i) {
            std::vector<double> x = fine->coordinate(i);
            f_ref.values[i] = window_bump(x, w.center, w.halfwidth);
        }
    }

    VarianceResult res;
    std::string path;
    std::ofstream os = open_csv(cfg, "variance.csv", path);
    res.csv_path = path;
    os << "h,V,cauchy_diff,empirical_var,empirical_se\n";

    for (double h : cfg.h_list) {
        DomainPtr dom = build_domain(shape, h);
        GridFunction rhs =
            bump_rhs ? mollify_convolve(f_ref, Mollifier::bspline(cfg.theta_order, dom->dim(), h),
                                        dom)
                     : (cfg.rhs_kind == "const" ? constant_rhs_times_theta(dom)
                                                : GridFunction::zero(dom));
        KernelMatrix A = assemble_matrix(dom, cfg.s, cfg.quadrature_q);
        double V = dual_norm_restricted(rhs, A);
        V *= V;

        // Monte Carlo cross-check of eq. of the pairing variance.
        PrecisionOperator P(A);
        FieldEnsemble ens = ensemble(P, cfg.seed, cfg.replicas, cfg.threads);
        double hd = std::pow(h, dom->dim());
        double m1 = 0, m2 = 0;
        for (const auto& phi : ens.samples) {
            double pairing = hd * rhs.values.dot(phi);
            m1 += pairing;
            m2 += pairing * pairing;
        }
        m1 /= ens.replicas;
        m2 /= ens.replicas;
        double evar = m2 - m1 * m1;
        double ese = evar * std::sqrt(2.0 / std::max(1, ens.replicas - 1));

        res.h.push_back(h);
        res.value.push_back(V);
        res.empirical_var.push_back(evar);
        res.empirical_se.push_back(ese);
        double diff = res.value.size() > 1 ? std::abs(V - res.value[res.value.size() - 2]) : 0.0;
        res.cauchy.push_back(diff);
        os << format_double(h) << "," << format_double(V) << ","
           << (res.value.size() > 1 ? format_double(diff) : "") << "," << format_double(evar)
           << "," << format_double(ese) << "\n";
    }
    if (res.value.size() > 1) {
        double vfine = res.value.back();
        double vprev = res.value[res.value.size() - 2];
        res.richardson = vfine + (vfine - vprev) / 3.0;
        os << "# richardson_reference=" << format_double(res.richardson) << "\n";
    }
    return res;
}

MaxStatResult run_maxstat(const ExperimentConfig& cfg) {
    ShapePtr shape = parse_shape(cfg.domain_spec);
    MaxStatResult res;
    std::string path;
    std::ofstream os = open_csv(cfg, "maxstat.csv", path);
    res.csv_path = path;
    os << "h,q05,q25,q50,q75,q95,ks_prev\n";

    for (double h : cfg.h_list) {
        DomainPtr dom = build_domain(shape, h);
        KernelMatrix A = assemble_matrix(dom, cfg.s, cfg.quadrature_q);
        PrecisionOperator P(A);
        FieldEnsemble ens = ensemble(P, cfg.seed, cfg.replicas, cfg.threads);
        MaxStatistic m = max_statistic(ens);

        double ks = 0;
        if (!res.maxima.empty()) ks = ks_distance(res.maxima.back(), m.sorted_maxima);
        res.h.push_back(h);
        res.maxima.push_back(m.sorted_maxima);
        res.ks_prev.push_back(ks);
        os << format_double(h) << "," << format_double(m.q05) << "," << format_double(m.q25)
           << "," << format_double(m.q50) << "," << format_double(m.q75) << ","
           << format_double(m.q95) << "," << (res.h.size() > 1 ? format_double(ks) : "") << "\n";

        std::string mpath;
        std::ofstream ms = open_csv(cfg, "maxima_h" + std::to_string(res.h.size()) + ".csv", mpath);
        ms << "max\n";
        for (double v : m.sorted_maxima) ms << format_double(v) << "\n";
    }
    return res;
}

SpectrumResult run_spectrum(const ExperimentConfig& cfg) {
    if (cfg.h_list.empty()) throw ConfigError("spectrum experiment needs an h value");
    ShapePtr shape = parse_shape(cfg.domain_spec);
    DomainPtr dom = build_domain(shape, cfg.h_list.front());
    KernelMatrix A = assemble_matrix(dom, cfg.s, cfg.quadrature_q);
    SpectralDecomposition dec = decompose(A);

    SpectrumResult res;
    res.eigenvalues.assign(dec.eigenvalues.data(), dec.eigenvalues.data() + dec.eigenvalues.size());
    res.weyl_exponent = weyl_fit(dec);
    res.weyl_target = 2.0 * cfg.s / dom->dim();

    std::string path;
    std::ofstream os = open_csv(cfg, "spectrum.csv", path);
    res.csv_path = path;
    os << "j,lambda\n";
    for (size_t j = 0; j < res.eigenvalues.size(); ++j)
        os << (j + 1) << "," << format_double(res.eigenvalues[j]) << "\n";
    os << "# weyl_exponent=" << format_double(res.weyl_exponent)
       << " target=" << format_double(res.weyl_target) << "\n";

    if (cfg.dump_vectors) {
        std::string vpath =
            (std::filesystem::path(cfg.out_dir) / "eigenvectors.txt").string();
        std::ofstream vs(vpath, std::ios::binary);
        if (!vs) throw Error("cannot open " + vpath);
        vs << "# rows: sites in domain order; columns: modes ascending\n";
        for (int i = 0; i < dec.eigenvectors.rows(); ++i) {
            for (int j = 0; j < dec.eigenvectors.cols(); ++j)
                vs << (j ? " " : "") << format_double(dec.eigenvectors(i, j));
            vs << "\n";
        }
    }
    return res;
}

namespace {

void write_heightmap_text(const GridFunction& u, const std::string& path) {
    const LatticeDomain& dom = *u.domain;
    if (dom.dim() != 2) throw Error("heightmap: only d=2 fields");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path);
    int n0 = dom.bbox_hi()[0] - dom.bbox_lo()[0] + 1;
    int n1 = dom.bbox_hi()[1] - dom.bbox_lo()[1] + 1;
    Eigen::MatrixXd grid = Eigen::MatrixXd::Zero(n0, n1);
    for (int i = 0; i < dom.site_count(); ++i)
        grid(dom.site(i)[0] - dom.bbox_lo()[0], dom.site(i)[1] - dom.bbox_lo()[1]) = u.values[i];
    for (int r = 0; r < n0; ++r) {
        for (int c = 0; c < n1; ++c) os << (c ? " " : "") << format_double(grid(r, c));
        os << "\n";
    }
}

void write_heightmap_pgm(const GridFunction& u, const std::string& path) {
    const LatticeDomain& dom = *u.domain;
    if (dom.dim() != 2) throw Error("heightmap: only d=2 fields");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path);
    int n0 = dom.bbox_hi()[0] - dom.bbox_lo()[0] + 1;
    int n1 = dom.bbox_hi()[1] - dom.bbox_lo()[1] + 1;
    double lo = u.values.minCoeff(), hi = u.values.maxCoeff();
    double scale = hi > lo ? 65535.0 / (hi - lo) : 0.0;
    Eigen::MatrixXd grid = Eigen::MatrixXd::Constant(n0, n1, lo);
    for (int i = 0; i < dom.site_count(); ++i)
        grid(dom.site(i)[0] - dom.bbox_lo()[0], dom.site(i)[1] - dom.bbox_lo()[1]) = u.values[i];
    os << "P5\n" << n1 << " " << n0 << "\n65535\n";
    for (int r = 0; r < n0; ++r)
        for (int c = 0; c < n1; ++c) {
            unsigned v = static_cast<unsigned>(std::lround((grid(r, c) - lo) * scale));
            os.put(static_cast<char>((v >> 8) & 0xFF));
            os.put(static_cast<char>(v & 0xFF));
        }
}

}  // namespace

SampleResult run_sample(const ExperimentConfig& cfg) {
    ShapePtr shape = parse_shape(cfg.domain_spec);
    double h = cfg.h_list.empty() ? 1.0 / 40.0 : cfg.h_list.front();
    DomainPtr dom = build_domain(shape, h);
    std::filesystem::create_directories(cfg.out_dir);

    SampleResult res;
    for (size_t si = 0; si < cfg.s_list.size(); ++si) {
        double s = cfg.s_list[si];
        KernelMatrix A = assemble_matrix(dom, s, cfg.quadrature_q);
        PrecisionOperator P(A);
        bool want_cov = dom->site_count() <= 64 && cfg.replicas >= 2;
        FieldEnsemble ens = ensemble(P, cfg.seed, cfg.replicas, cfg.threads, want_cov);
        if (want_cov) {
            std::string cpath = (std::filesystem::path(cfg.out_dir) /
                                 ("covariance_s" + std::to_string(si) + ".csv"))
                                    .string();
            std::ofstream cs(cpath, std::ios::binary);
            if (!cs) throw Error("cannot open " + cpath);
            cs << "# empirical covariance, row-major over site order\n";
            for (int i = 0; i < ens.covariance.rows(); ++i) {
                for (int j = 0; j < ens.covariance.cols(); ++j)
                    cs << (j ? "," : "") << format_double(ens.covariance(i, j));
                cs << "\n";
            }
            res.covariance_paths.push_back(cpath);
        }
        for (int r = 0; r < ens.replicas; ++r) {
            GridFunction phi(dom, ens.samples[r]);
            std::string base = "field_s" + std::to_string(si) + "_r" + std::to_string(r);
            std::string fpath = (std::filesystem::path(cfg.out_dir) / (base + ".txt")).string();
            std::ofstream os(fpath, std::ios::binary);
            if (!os) throw Error("cannot open " + fpath);
            os << "# s=" << format_double(s) << "\n";
            dump_grid_function(phi, os);
            res.field_paths.push_back(fpath);
            if (dom->dim() == 2) {
                std::string mpath =
                    (std::filesystem::path(cfg.out_dir) / (base + ".mat")).string();
                write_heightmap_text(phi, mpath);
                res.field_paths.push_back(mpath);
                if (cfg.heightmap) {
                    std::string ppath =
                        (std::filesystem::path(cfg.out_dir) / (base + ".pgm")).string();
                    write_heightmap_pgm(phi, ppath);
                    res.heightmap_paths.push_back(ppath);
                }
            }
        }
    }
    return res;
}

SelfTestResult run_selftest(const ExperimentConfig& cfg) {
    SelfTestResult res;
    auto add = [&res](const std::string& name, double measured, double threshold) {
        res.checks.push_back({name, measured, threshold, measured <= threshold});
    };
    const int q = cfg.quadrature_q;

    {
        double e = std::abs(kernel_entry({0}, 1.0, 1.0, q) - 2.0) +
                   std::abs(kernel_entry({1}, 1.0, 1.0, q) + 1.0) +
                   std::abs(kernel_entry({0, 1}, 1.0, 1.0, q) + 1.0);
        add("stencil_laplacian_s1", e, 1e-10);
    }
    {
        double e = std::abs(kernel_entry({0}, 1.0, 2.0, q) - 6.0) +
                   std::abs(kernel_entry({1}, 1.0, 2.0, q) + 4.0) +
                   std::abs(kernel_entry({2}, 1.0, 2.0, q) - 1.0);
        add("stencil_bilaplacian_s2", e, 1e-10);
    }
    {
        double e = std::abs(kernel_entry({0}, 1.0, 0.5, q) - 4.0 / kPi) +
                   std::abs(kernel_entry({1}, 1.0, 0.5, q) + 4.0 / (3.0 * kPi));
        add("kernel_s_half_closed_form", e, 1e-6);
    }
    {
        GaussianPair g{1, 5.0};
        PeriodicBox box(1, 0.5, 64, {-32});
        add("commutation_check", commute_check(g, 1.0, box), 1e-8);
    }
    {
        GaussianPair g{1, 0.5};
        PeriodicBox box(1, 0.5, 64, {-32});
        add("poisson_fold", poisson_fold_check(g, box, 3), 1e-8);
    }
    {
        double worst = 0;
        for (int k = 1; k <= 4; ++k)
            for (int i = 0; i <= 40; ++i) {
                double x = -2.0 + 4.0 * i / 40 + 0.123;
                double sum = 0;
                for (int m = -8; m <= 8; ++m) sum += bspline_eval_1d(k, x - m);
                worst = std::max(worst, std::abs(sum - 1.0));
            }
        add("bspline_partition_of_unity", worst, 1e-12);
    }
    {
        DomainPtr dom = build_domain(parse_shape("box(0,1)"), 0.5);
        KernelMatrix A = assemble_matrix(dom, 1.0, q);
        PrecisionOperator P(A);
        Eigen::MatrixXd C = analytic_covariance(P);
        add("single_site_variance", std::abs(C(0, 0) - 0.25), 1e-12);
    }
    {
        DomainPtr dom = build_domain(parse_shape("box(0,1)"), 1.0 / 21.0);
        KernelMatrix A = assemble_matrix(dom, 1.5, q);
        SpectralDecomposition dec = decompose(A);
        double hd = dom->spacing();
        Eigen::MatrixXd direct = (hd * A.matrix()).inverse();
        add("eigen_covariance_equivalence", (series_covariance(dec) - direct).cwiseAbs().maxCoeff(),
            1e-8);
    }
    {
        // Poincaré ratio stability across refinements, s in {0.5, 1, 1.5}.
        ShapePtr shape = parse_shape("box(0,1)");
        double worst_excess = 0;
        for (double s : {0.5, 1.0, 1.5}) {
            double coarse_c = 0;
            for (int lev = 0; lev < 4; ++lev) {
                double h = 1.0 / (8 << lev);
                DomainPtr dom = build_domain(shape, h);
                KernelMatrix A = assemble_matrix(dom, s, q);
                double hd = h;
                double cmax = 0;
                for (int trial = 0; trial < 200; ++trial) {
                    RngSpec rng(cfg.seed, 1000 * lev + trial);
                    Eigen::VectorXd v(dom->site_count());
                    for (int i = 0; i < v.size(); ++i) v[i] = rng.normal();
                    double l2 = std::sqrt(hd * v.squaredNorm());
                    double hs = std::sqrt(hd * v.dot(A.matrix() * v));
                    cmax = std::max(cmax, l2 / hs);
                }
                if (lev == 0)
                    coarse_c = cmax;
                else
                    worst_excess = std::max(worst_excess, cmax / (1.1 * coarse_c));
            }
        }
        add("poincare_ratio_bound", worst_excess, 1.0);
    }

    res.all_pass = std::all_of(res.checks.begin(), res.checks.end(),
                               [](const SelfTestCheck& c) { return c.pass; });
    return res;
}

}  // namespace fgf
