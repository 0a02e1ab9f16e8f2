#include "fgf/fraclap.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>

#include "fgf/error.hpp"
#include "fgf/format.hpp"

namespace fgf {

namespace {
constexpr double kPi = std::numbers::pi;

int auto_nodes(int dim) {
    switch (dim) {
        case 1: return 4096;
        case 2: return 256;
        default: return 64;
    }
}
}  // namespace

KernelTable::KernelTable(int dim, double h, double s, std::vector<int> radius, int q)
    : dim_(dim), h_(h), s_(s), radius_(std::move(radius)) {
    if (dim_ < 1) throw Error("KernelTable: dimension must be positive");
    if (!(h_ > 0)) throw Error("KernelTable: spacing must be positive");
    if (s_ < 0) throw Error("KernelTable: order s must be >= 0");
    if (static_cast<int>(radius_.size()) != dim_) throw Error("KernelTable: radius size mismatch");
    int rmax = 0;
    for (int r : radius_) {
        if (r < 0) throw Error("KernelTable: radius must be >= 0");
        rmax = std::max(rmax, r);
    }
    int support = 2 * (rmax + 1);
    if (q < 0) throw Error("KernelTable: refinement q must be >= 0 (0 = auto)");
    q_ = q > 0 ? q : std::max(1, (auto_nodes(dim_) + support - 1) / support);
    nodes_ = q_ * support;

    // Symbol samples on the N^d frequency grid; one inverse FFT yields all
    // stencil weights at once: K(m) = N^{-d} Σ_k M_h(ξ_k)^{2s} e^{2πi k·m/N}.
    const int N = nodes_;
    long total = 1;
    for (int a = 0; a < dim_; ++a) total *= N;
    std::vector<double> axis(N);
    for (int k = 0; k < N; ++k) {
        double sn = std::sin(kPi * k / N);
        axis[k] = 4.0 / (h_ * h_) * sn * sn;
    }
    std::vector<std::complex<double>> data(total);
    std::vector<int> k(dim_, 0);
    for (long f = 0; f < total; ++f) {
        double m2 = 0;
        for (int a = 0; a < dim_; ++a) m2 += axis[k[a]];
        data[f] = (s_ == 0.0) ? 1.0 : std::pow(m2, s_);
        int a = dim_ - 1;
        while (a >= 0 && ++k[a] == N) k[a--] = 0;
    }
    fft_nd(data, dim_, N, +1);

    stride_.assign(dim_, 1);
    for (int a = dim_ - 2; a >= 0; --a) stride_[a] = stride_[a + 1] * (2 * radius_[a + 1] + 1);
    long tsize = static_cast<long>(stride_[0]) * (2 * radius_[0] + 1);
    values_.resize(tsize);
    std::vector<int> m(dim_, 0);
    for (int a = 0; a < dim_; ++a) m[a] = -radius_[a];
    for (long t = 0; t < tsize; ++t) {
        long f = 0;
        for (int a = 0; a < dim_; ++a) {
            int idx = m[a] >= 0 ? m[a] : m[a] + N;
            f = f * N + idx;
        }
        values_[t] = data[f].real() / static_cast<double>(total);
        int a = dim_ - 1;
        while (a >= 0 && ++m[a] > radius_[a]) {
            m[a] = -radius_[a];
            --a;
        }
    }
}

double KernelTable::at(const std::vector<int>& offset) const {
    long t = 0;
    for (int a = 0; a < dim_; ++a) {
        int idx = offset[a] + radius_[a];
        if (idx < 0 || idx > 2 * radius_[a])
            throw Error("KernelTable::at: offset outside stored radius");
        t += static_cast<long>(idx) * stride_[a];
    }
    return values_[t];
}

void KernelTable::dump(std::ostream& os) const {
    os << "# kerneltable d=" << dim_ << " h=" << format_double(h_) << " s=" << format_double(s_)
       << " q=" << q_ << "\n";
    std::vector<int> m(dim_);
    for (int a = 0; a < dim_; ++a) m[a] = -radius_[a];
    while (true) {
        for (int a = 0; a < dim_; ++a) os << m[a] << " ";
        os << format_double(at(m)) << "\n";
        int a = dim_ - 1;
        while (a >= 0 && ++m[a] > radius_[a]) {
            m[a] = -radius_[a];
            --a;
        }
        if (a < 0) break;
    }
}

double kernel_entry(const std::vector<int>& offset, double h, double s, int q) {
    std::vector<int> radius(offset.size());
    for (size_t a = 0; a < offset.size(); ++a) radius[a] = std::abs(offset[a]);
    KernelTable table(static_cast<int>(offset.size()), h, s, radius, q);
    return table.at(offset);
}

KernelMatrix::KernelMatrix(DomainPtr dom, double s, int q) : dom_(std::move(dom)), s_(s) {
    const LatticeDomain& d = *dom_;
    std::vector<int> radius(d.dim());
    for (int a = 0; a < d.dim(); ++a) radius[a] = d.bbox_hi()[a] - d.bbox_lo()[a];
    KernelTable table(d.dim(), d.spacing(), s_, radius, q);

    int n = d.site_count();
    A_.resize(n, n);
    std::vector<int> off(d.dim());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            for (int a = 0; a < d.dim(); ++a) off[a] = d.site(i)[a] - d.site(j)[a];
            double v = table.at(off);
            A_(i, j) = v;
            A_(j, i) = v;
        }
    }
    llt_.compute(A_);
    if (llt_.info() != Eigen::Success)
        throw Error("assemble_matrix: Cholesky failed (matrix not positive definite); "
                    "increase the quadrature refinement q");
}

KernelMatrix assemble_matrix(DomainPtr dom, double s, int q) {
    return KernelMatrix(std::move(dom), s, q);
}

BoxFunction apply_full_lattice(const BoxFunction& u, double s) {
    if (s < 0) throw Error("apply_full_lattice: order s must be >= 0");
    if (s == 0.0) return u;
    SpectrumGrid spec = dft_forward(u);
    double h = u.box->spacing();
    for (long f = 0; f < u.box->site_count(); ++f) {
        std::vector<double> xi = spec.frequency(f);
        spec.amplitudes()[f] *= std::pow(mh_squared(xi, h), s);
    }
    return dft_inverse(spec);
}

BoxFunction apply_continuous_reference(const BoxFunction& u, double s) {
    if (s < 0) throw Error("apply_continuous_reference: order s must be >= 0");
    if (s == 0.0) return u;
    SpectrumGrid spec = dft_forward(u);
    for (long f = 0; f < u.box->site_count(); ++f) {
        std::vector<double> xi = spec.frequency(f);
        double r2 = 0;
        for (double x : xi) r2 += x * x;
        spec.amplitudes()[f] *= (r2 == 0.0) ? 0.0 : std::pow(r2, s);
    }
    return dft_inverse(spec);
}

double commute_check(const GaussianPair& g, double s, const PeriodicBox& box, int fold_radius,
                     int quad_nodes) {
    if (g.dim != box.dim()) throw Error("commute_check: dimension mismatch");
    int d = box.dim();
    double h = box.spacing();
    if (quad_nodes <= 0) quad_nodes = d == 1 ? 8192 : 384;

    // Discrete path: restrict g to the box lattice, apply the box multiplier.
    Eigen::VectorXd samples(box.site_count());
    for (long i = 0; i < box.site_count(); ++i) {
        std::vector<double> x = box.coordinate(i);
        samples[i] = g.eval(x);
    }
    auto boxp = std::make_shared<PeriodicBox>(box);
    BoxFunction discrete = apply_full_lattice(BoxFunction(boxp, std::move(samples)), s);

    // Continuous path: (2π)^{-d} ∫ M_h(ξ)^{2s} F[g](ξ) e^{iξ·x} dξ truncated
    // at T = fold_radius·2π/h, trapezoid on quad_nodes+1 points per axis.
    const double T = fold_radius * 2.0 * kPi / h;
    const int nq = quad_nodes;
    const double dxi = 2.0 * T / nq;
    std::vector<double> node(nq + 1), weight(nq + 1), sym(nq + 1);
    for (int i = 0; i <= nq; ++i) {
        node[i] = -T + dxi * i;
        weight[i] = (i == 0 || i == nq) ? 0.5 : 1.0;
    }

    double worst = 0;
    std::vector<double> xi(d);
    std::vector<int> idx(d, 0);
    if (d == 1) {
        for (long i = 0; i < box.site_count(); ++i) {
            double x = box.coordinate(i)[0];
            double acc = 0;
            for (int a = 0; a <= nq; ++a) {
                xi[0] = node[a];
                double m2s = (s == 0.0) ? 1.0 : std::pow(mh_squared(xi, h), s);
                acc += weight[a] * m2s * g.transform(xi) * std::cos(node[a] * x);
            }
            double cont = acc * dxi / (2.0 * kPi);
            worst = std::max(worst, std::abs(cont - discrete.values[i]));
        }
        return worst;
    }
    // d >= 2: precompute per-axis factors of the separable Gaussian transform
    // and sweep the tensor grid once per site.
    for (long i = 0; i < box.site_count(); ++i) {
        std::vector<double> x = box.coordinate(i);
        double acc = 0;
        std::fill(idx.begin(), idx.end(), 0);
        while (true) {
            double w = 1, phase = 0;
            for (int a = 0; a < d; ++a) {
                xi[a] = node[idx[a]];
                w *= weight[idx[a]];
                phase += xi[a] * x[a];
            }
            double m2s = (s == 0.0) ? 1.0 : std::pow(mh_squared(xi, h), s);
            acc += w * m2s * g.transform(xi) * std::cos(phase);
            int a = d - 1;
            while (a >= 0 && ++idx[a] > nq) idx[a--] = 0;
            if (a < 0) break;
        }
        double cont = acc * std::pow(dxi / (2.0 * kPi), d);
        worst = std::max(worst, std::abs(cont - discrete.values[i]));
    }
    return worst;
}

}  // namespace fgf
