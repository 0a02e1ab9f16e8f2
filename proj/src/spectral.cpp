#include "fgf/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

#include "fgf/error.hpp"

namespace fgf {

namespace {
constexpr double kPi = std::numbers::pi;
std::mutex g_fftw_mutex;  // FFTW planning is not thread-safe
}  // namespace

double mh_squared(std::span<const double> xi, double h) {
    double acc = 0;
    for (double x : xi) {
        double s = std::sin(0.5 * x * h);
        acc += s * s;
    }
    return 4.0 / (h * h) * acc;
}

SymbolEvaluator::SymbolEvaluator(int dim, double h) : dim_(dim), h_(h) {
    if (dim_ < 1) throw Error("SymbolEvaluator: dimension must be positive");
    if (!(h_ > 0)) throw Error("SymbolEvaluator: spacing must be positive");
}

double SymbolEvaluator::power(std::span<const double> xi, double s) const {
    if (s == 0.0) return 1.0;
    return std::pow(squared(xi), s);
}

SpectrumGrid::SpectrumGrid(BoxPtr box, std::vector<std::complex<double>> amplitudes)
    : box_(std::move(box)), amp_(std::move(amplitudes)) {
    if (static_cast<long>(amp_.size()) != box_->site_count())
        throw Error("SpectrumGrid: node count does not match box");
}

std::vector<int> SpectrumGrid::centered_index(long flat) const {
    std::vector<int> k = box_->unflatten(flat);
    int n = box_->sites_per_axis();
    for (int& kj : k)
        if (kj > n / 2) kj -= n;
    return k;
}

std::vector<double> SpectrumGrid::frequency(long flat) const {
    std::vector<int> k = centered_index(flat);
    std::vector<double> xi(k.size());
    double L = box_->period();
    for (size_t j = 0; j < k.size(); ++j) xi[j] = 2.0 * kPi * k[j] / L;
    return xi;
}

void fft_nd(std::vector<std::complex<double>>& data, int dim, int n, int sign) {
    std::vector<int> shape(dim, n);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        plan = fftw_plan_dft(dim, shape.data(), reinterpret_cast<fftw_complex*>(data.data()),
                             reinterpret_cast<fftw_complex*>(data.data()),
                             sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    if (!plan) throw Error("fft_nd: FFTW plan creation failed");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        fftw_destroy_plan(plan);
    }
}

SpectrumGrid dft_forward(const BoxFunction& u) {
    const PeriodicBox& box = *u.box;
    long total = box.site_count();
    std::vector<std::complex<double>> data(total);
    for (long i = 0; i < total; ++i) data[i] = u.values[i];
    fft_nd(data, box.dim(), box.sites_per_axis(), -1);
    // amp_k = h^d e^{-i xi_k · h·origin} Σ_j e^{-2πi k·j/n} u_j
    double hd = std::pow(box.spacing(), box.dim());
    SpectrumGrid spec(u.box, std::move(data));
    int n = box.sites_per_axis();
    for (long f = 0; f < total; ++f) {
        std::vector<int> k = box.unflatten(f);
        double phase = 0;
        for (int a = 0; a < box.dim(); ++a) phase -= 2.0 * kPi * k[a] * box.origin()[a] / n;
        spec.amplitudes()[f] *= hd * std::polar(1.0, phase);
    }
    return spec;
}

BoxFunction dft_inverse(const SpectrumGrid& spec) {
    const PeriodicBox& box = *spec.box();
    long total = box.site_count();
    int n = box.sites_per_axis();
    std::vector<std::complex<double>> data(total);
    // u_j = L^{-d} Σ_k amp_k e^{+i xi_k·h(origin+j)}
    for (long f = 0; f < total; ++f) {
        std::vector<int> k = box.unflatten(f);
        double phase = 0;
        for (int a = 0; a < box.dim(); ++a) phase += 2.0 * kPi * k[a] * box.origin()[a] / n;
        data[f] = spec.amplitudes()[f] * std::polar(1.0, phase);
    }
    fft_nd(data, box.dim(), n, +1);
    double scale = 1.0 / std::pow(box.period(), box.dim());
    Eigen::VectorXd v(total);
    for (long i = 0; i < total; ++i) v[i] = data[i].real() * scale;
    return BoxFunction(spec.box(), std::move(v));
}

double GaussianPair::eval(std::span<const double> x) const {
    double r2 = 0;
    for (double xj : x) r2 += xj * xj;
    return std::exp(-r2 / (2.0 * sigma2));
}

double GaussianPair::transform(std::span<const double> xi) const {
    double r2 = 0;
    for (double xj : xi) r2 += xj * xj;
    return std::pow(2.0 * kPi * sigma2, 0.5 * dim) * std::exp(-0.5 * sigma2 * r2);
}

double poisson_fold_check(const GaussianPair& g, const PeriodicBox& box, int fold_radius) {
    if (fold_radius < 0) throw Error("poisson_fold_check: fold_radius must be >= 0");
    if (g.dim != box.dim()) throw Error("poisson_fold_check: dimension mismatch");
    int d = box.dim();
    double h = box.spacing();

    // Sample g on the box and take its exact finite F_h (the lattice sum
    // truncated to the box, negligible beyond it for a decaying Gaussian).
    Eigen::VectorXd samples(box.site_count());
    for (long i = 0; i < box.site_count(); ++i) {
        std::vector<double> x = box.coordinate(i);
        samples[i] = g.eval(x);
    }
    SpectrumGrid spec = dft_forward(BoxFunction(std::make_shared<PeriodicBox>(box), samples));

    double zeta0 = 2.0 * kPi / h;
    double worst = 0;
    std::vector<double> shifted(d);
    for (long f = 0; f < box.site_count(); ++f) {
        std::vector<double> xi = spec.frequency(f);
        double fold = 0;
        std::vector<int> z(d, -fold_radius);
        while (true) {
            for (int a = 0; a < d; ++a) shifted[a] = xi[a] + zeta0 * z[a];
            fold += g.transform(shifted);
            int a = d - 1;
            while (a >= 0 && ++z[a] > fold_radius) z[a--] = -fold_radius;
            if (a < 0) break;
        }
        worst = std::max(worst, std::abs(spec.amplitudes()[f].real() - fold) +
                                    std::abs(spec.amplitudes()[f].imag()));
    }
    return worst;
}

}  // namespace fgf
