#include "fgf/mollify.hpp"

#include <cmath>
#include <vector>

#include "fgf/error.hpp"

namespace fgf {

namespace {

double binom(int n, int k) {
    double v = 1;
    for (int i = 0; i < k; ++i) v = v * (n - i) / (i + 1);
    return v;
}

double factorial(int n) {
    double v = 1;
    for (int i = 2; i <= n; ++i) v *= i;
    return v;
}

// Trapezoid of exp(-1/(1-x^2)) over (-1,1); the integrand vanishes with all
// derivatives at the endpoints, so the rule converges superalgebraically.
double bump_normalizer() {
    static const double c = [] {
        const int n = 1 << 16;
        double acc = 0;
        for (int i = 1; i < n; ++i) {
            double x = -1.0 + 2.0 * i / n;
            acc += std::exp(-1.0 / (1.0 - x * x));
        }
        return acc * 2.0 / n;
    }();
    return c;
}

}  // namespace

double bspline_eval_1d(int k, double x) {
    if (k < 1) throw Error("bspline_eval: order must be >= 1");
    if (k == 1) return (x >= -0.5 && x < 0.5) ? 1.0 : 0.0;
    if (x <= -0.5 * k || x >= 0.5 * k) return 0.0;
    double acc = 0;
    for (int j = 0; j <= k; ++j) {
        double t = x + 0.5 * k - j;
        if (t <= 0) break;  // terms are ordered by decreasing t
        double p = std::pow(t, k - 1);
        acc += (j % 2 == 0 ? p : -p) * binom(k, j);
    }
    return acc / factorial(k - 1);
}

double bspline_eval(int k, std::span<const double> x) {
    double v = 1;
    for (double xj : x) v *= bspline_eval_1d(k, xj);
    return v;
}

double bspline_ft_1d(int k, double xi) {
    double t = 0.5 * xi;
    double sinc;
    if (std::abs(t) < 1e-4) {
        double t2 = t * t;
        sinc = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
    } else {
        sinc = std::sin(t) / t;
    }
    return std::pow(sinc, k);
}

double bspline_ft(int k, std::span<const double> xi) {
    if (k < 1) throw Error("bspline_ft: order must be >= 1");
    double v = 1;
    for (double x : xi) v *= bspline_ft_1d(k, x);
    return v;
}

double bump_eval_1d(double x) {
    if (std::abs(x) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - x * x)) / bump_normalizer();
}

double bump_eval(std::span<const double> x) {
    double v = 1;
    for (double xj : x) v *= bump_eval_1d(xj);
    return v;
}

Mollifier::Mollifier(Kind kind, int order, int dim, double scale)
    : kind_(kind), order_(order), dim_(dim), h_(scale) {
    if (dim_ < 1) throw Error("Mollifier: dimension must be positive");
    if (!(h_ > 0)) throw Error("Mollifier: scale must be positive");
    if (kind_ == Kind::BSpline && order_ < 1) throw Error("Mollifier: B-spline order must be >= 1");
}

double Mollifier::support_radius() const {
    return kind_ == Kind::BSpline ? 0.5 * order_ * h_ : h_;
}

double Mollifier::eval(std::span<const double> x) const {
    double scale = std::pow(h_, -dim_);
    std::vector<double> y(x.size());
    for (size_t j = 0; j < x.size(); ++j) y[j] = x[j] / h_;
    return scale * (kind_ == Kind::BSpline ? bspline_eval(order_, y) : bump_eval(y));
}

double Mollifier::ft(std::span<const double> xi) const {
    if (kind_ == Kind::BSpline) {
        std::vector<double> y(xi.size());
        for (size_t j = 0; j < xi.size(); ++j) y[j] = xi[j] * h_;
        return bspline_ft(order_, y);
    }
    throw Error("Mollifier::ft: no closed form for the bump transform");
}

double mollify_convolve_at(const BoxFunction& f_ref, const Mollifier& moll,
                           std::span<const double> x) {
    const PeriodicBox& box = *f_ref.box;
    int d = box.dim();
    double delta = box.spacing();
    double r = moll.support_radius();

    std::vector<int> jlo(d), jhi(d);
    for (int a = 0; a < d; ++a) {
        // fine indices j with h·(origin+j) inside [x-r, x+r]
        jlo[a] = static_cast<int>(std::floor((x[a] - r) / delta)) - box.origin()[a];
        jhi[a] = static_cast<int>(std::ceil((x[a] + r) / delta)) - box.origin()[a];
        if (jlo[a] < 0 || jhi[a] >= box.sites_per_axis())
            throw Error("mollify_convolve: support window leaves the box (insufficient padding)");
    }

    double acc = 0;
    std::vector<int> j = jlo;
    std::vector<double> diff(d);
    while (true) {
        double y = f_ref.values[box.flatten(j)];
        if (y != 0.0) {
            for (int a = 0; a < d; ++a) diff[a] = x[a] - delta * (box.origin()[a] + j[a]);
            acc += moll.eval(diff) * y;
        }
        int a = d - 1;
        while (a >= 0 && ++j[a] > jhi[a]) {
            j[a] = jlo[a];
            --a;
        }
        if (a < 0) break;
    }
    return acc * std::pow(delta, d);
}

GridFunction mollify_convolve(const BoxFunction& f_ref, const Mollifier& moll, DomainPtr targets,
                              double min_ratio) {
    double ratio = moll.scale() / f_ref.box->spacing();
    if (ratio < min_ratio - 1e-9)
        throw Error("mollify_convolve: fine grid must be at least " +
                    std::to_string(min_ratio) + "x finer than the mollifier scale");
    GridFunction out = GridFunction::zero(targets);
    for (int i = 0; i < targets->site_count(); ++i) {
        std::vector<double> x = targets->coordinate(i);
        out.values[i] = mollify_convolve_at(f_ref, moll, x);
    }
    return out;
}

BoxFunction interpolate(const GridFunction& phi, int order, BoxPtr eval_box, double min_ratio) {
    const LatticeDomain& dom = *phi.domain;
    int d = dom.dim();
    double h = dom.spacing();
    double delta = eval_box->spacing();
    if (eval_box->dim() != d) throw Error("interpolate: dimension mismatch");
    if (h / delta < min_ratio - 1e-9)
        throw Error("interpolate: evaluation grid must resolve h/" + std::to_string(min_ratio) +
                    " or finer");

    BoxFunction out = BoxFunction::zero(eval_box);
    // Scatter each coefficient onto the fine sites covered by its spline.
    double half = 0.5 * order * h;
    std::vector<double> arg(d);
    for (int i = 0; i < dom.site_count(); ++i) {
        double coeff = phi.values[i];
        if (coeff == 0.0) continue;
        std::vector<double> y = dom.coordinate(i);
        std::vector<int> jlo(d), jhi(d);
        for (int a = 0; a < d; ++a) {
            jlo[a] = static_cast<int>(std::ceil((y[a] - half) / delta - 1e-12)) -
                     eval_box->origin()[a];
            jhi[a] = static_cast<int>(std::floor((y[a] + half) / delta + 1e-12)) -
                     eval_box->origin()[a];
            if (jlo[a] < 0 || jhi[a] >= eval_box->sites_per_axis())
                throw Error("interpolate: spline support leaves the evaluation box");
        }
        std::vector<int> j = jlo;
        while (true) {
            for (int a = 0; a < d; ++a)
                arg[a] = (delta * (eval_box->origin()[a] + j[a]) - y[a]) / h;
            // h^d Θ_h(x-y) = Θ((x-y)/h)
            out.values[eval_box->flatten(j)] += coeff * bspline_eval(order, arg);
            int a = d - 1;
            while (a >= 0 && ++j[a] > jhi[a]) {
                j[a] = jlo[a];
                --a;
            }
            if (a < 0) break;
        }
    }
    return out;
}

}  // namespace fgf
