#include "fgf/solver.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "fgf/error.hpp"
#include "fgf/format.hpp"

namespace fgf {

namespace {

GridFunction cg_solve(const KernelMatrix& op, const GridFunction& g, double tol) {
    const Eigen::MatrixXd& A = op.matrix();
    const Eigen::VectorXd& b = g.values;
    const long n = b.size();
    const long cap = 20 * n;

    Eigen::VectorXd invdiag = A.diagonal().cwiseInverse();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd r = b;
    double bnorm = b.norm();
    if (bnorm == 0.0) return GridFunction(g.domain, std::move(x));

    Eigen::VectorXd z = invdiag.cwiseProduct(r);
    Eigen::VectorXd p = z;
    double rz = r.dot(z);
    std::vector<double> history;
    for (long it = 0; it < cap; ++it) {
        Eigen::VectorXd Ap = A * p;
        double alpha = rz / p.dot(Ap);
        x += alpha * p;
        r -= alpha * Ap;
        double rel = r.norm() / bnorm;
        history.push_back(rel);
        if (rel <= tol) return GridFunction(g.domain, std::move(x));
        z = invdiag.cwiseProduct(r);
        double rz_new = r.dot(z);
        p = z + (rz_new / rz) * p;
        rz = rz_new;
    }
    std::ostringstream os;
    os << "solve_dirichlet: CG did not reach tol=" << format_double(tol) << " within " << cap
       << " iterations; residual history (last 10):";
    size_t start = history.size() > 10 ? history.size() - 10 : 0;
    for (size_t i = start; i < history.size(); ++i) os << " " << format_double(history[i]);
    throw Error(os.str());
}

}  // namespace

GridFunction solve_dirichlet(const DirichletProblem& p, SolveMethod method, double tol) {
    if (!p.op) throw Error("solve_dirichlet: missing operator");
    const LatticeDomain& da = *p.op->domain();
    const LatticeDomain& db = *p.rhs.domain;
    if (da.dim() != db.dim() || da.spacing() != db.spacing() || da.sites() != db.sites())
        throw Error("solve_dirichlet: operator and rhs domains differ");
    if (method == SolveMethod::Direct) {
        Eigen::VectorXd x = p.op->cholesky().solve(p.rhs.values);
        return GridFunction(p.rhs.domain, std::move(x));
    }
    if (!(tol > 0)) throw Error("solve_dirichlet: iterative tol must be positive");
    return cg_solve(*p.op, p.rhs, tol);
}

double sobolev_norm_full_lattice(const GridFunction& u, const NormRequest& req) {
    if (req.oversampling < 1) throw Error("sobolev_norm: oversampling Q must be >= 1");
    const LatticeDomain& dom = *u.domain;
    int d = dom.dim();
    double h = dom.spacing();

    BoxPtr base = make_embedding_box(dom, req.pad_factor);
    long n_total = static_cast<long>(base->sites_per_axis()) * req.oversampling;
    auto box = std::make_shared<PeriodicBox>(d, h, static_cast<int>(n_total), base->origin());
    SpectrumGrid spec = dft_forward(embed(u, box));

    if (req.homogeneous && req.sigma <= -0.5 * d) {
        double mass = std::abs(spec.amplitudes()[0].real());
        double scale = std::pow(h, d) * u.values.cwiseAbs().sum();
        if (mass > 1e-12 * scale)
            throw Error("sobolev_norm: norm divergent (homogeneous sigma <= -d/2 with nonzero "
                        "total mass)");
    }

    double acc = 0;
    for (long f = 0; f < box->site_count(); ++f) {
        if (f == 0 && req.homogeneous && req.sigma < 0) continue;
        std::vector<double> xi = spec.frequency(f);
        double m2 = mh_squared(xi, h);
        double w;
        if (req.homogeneous)
            w = (req.sigma == 0.0) ? 1.0 : std::pow(m2, req.sigma);
        else
            w = std::pow(1.0 + m2, req.sigma);
        acc += w * std::norm(spec.amplitudes()[f]);
    }
    // (2π)^{-d} Π dξ = L_total^{-d}
    double Ld = std::pow(box->period(), d);
    return std::sqrt(acc / Ld);
}

double dual_norm_restricted(const GridFunction& f, const KernelMatrix& A) {
    const LatticeDomain& da = *A.domain();
    const LatticeDomain& db = *f.domain;
    if (da.dim() != db.dim() || da.spacing() != db.spacing() || da.sites() != db.sites())
        throw Error("dual_norm_restricted: matrix assembled on a different domain");
    Eigen::VectorXd x = A.cholesky().solve(f.values);
    double hd = std::pow(da.spacing(), da.dim());
    double v = hd * f.values.dot(x);
    return std::sqrt(std::max(v, 0.0));
}

double error_functional(const BoxFunction& u_ref, const GridFunction& u_h,
                        const Mollifier& theta, double s, const ErrorFunctionalOptions& opt) {
    const LatticeDomain& dom = *u_h.domain;
    int d = dom.dim();
    double h = dom.spacing();
    double delta = u_ref.box->spacing();
    if (h / delta < opt.min_ratio - 1e-9)
        throw Error("error_functional: reference grid must be at least " +
                    std::to_string(opt.min_ratio) + "x finer than h");
    if (theta.scale() != h) throw Error("error_functional: mollifier scale must equal h");

    // Lattice index range where θ_h*u can be nonzero: support of u_ref
    // (detected on the fine grid) dilated by the mollifier radius, extended
    // to cover the solution's own sites.
    const PeriodicBox& fine = *u_ref.box;
    std::vector<int> flo(d, 0), fhi(d, -1);
    bool any = false;
    for (long i = 0; i < fine.site_count(); ++i) {
        if (u_ref.values[i] == 0.0) continue;
        std::vector<int> j = fine.unflatten(i);
        if (!any) {
            flo = j;
            fhi = j;
            any = true;
        } else {
            for (int a = 0; a < d; ++a) {
                flo[a] = std::min(flo[a], j[a]);
                fhi[a] = std::max(fhi[a], j[a]);
            }
        }
    }

    std::vector<int> mlo(d), mhi(d);
    double r = theta.support_radius();
    for (int a = 0; a < d; ++a) {
        if (any) {
            double xlo = delta * (fine.origin()[a] + flo[a]) - r;
            double xhi = delta * (fine.origin()[a] + fhi[a]) + r;
            mlo[a] = static_cast<int>(std::floor(xlo / h));
            mhi[a] = static_cast<int>(std::ceil(xhi / h));
        } else {
            mlo[a] = dom.bbox_lo()[a];
            mhi[a] = dom.bbox_hi()[a];
        }
        mlo[a] = std::min(mlo[a], dom.bbox_lo()[a]);
        mhi[a] = std::max(mhi[a], dom.bbox_hi()[a]);
    }

    // Synthetic index-box domain holding the difference θ_h*u - u_h.
    std::vector<double> slo(d), shi(d);
    for (int a = 0; a < d; ++a) {
        slo[a] = h * (mlo[a] - 0.5);
        shi[a] = h * (mhi[a] + 0.5);
    }
    DomainPtr range = build_domain(make_box(slo, shi), h);
    GridFunction diff = GridFunction::zero(range);
    for (int i = 0; i < range->site_count(); ++i) {
        std::vector<double> x = range->coordinate(i);
        diff.values[i] = mollify_convolve_at(u_ref, theta, x);
    }
    for (int i = 0; i < dom.site_count(); ++i) {
        int j = range->find(dom.site(i));
        if (j < 0) throw Error("error_functional: solution site missing from range");
        diff.values[j] -= u_h.values[i];
    }
    NormRequest req;
    req.sigma = s;
    req.homogeneous = true;
    req.oversampling = opt.oversampling;
    req.pad_factor = opt.pad_factor;
    return sobolev_norm_full_lattice(diff, req);
}

}  // namespace fgf
