#pragma once

#include <complex>
#include <span>
#include <vector>

#include "fgf/grid.hpp"

namespace fgf {

/// Squared symbol of the (2d+1)-point Laplacian stencil:
/// M_h(xi)^2 = Σ_j (4/h^2) sin^2(xi_j h/2). 2π/h-periodic per axis,
/// zero exactly on the dual lattice (2π/h)Z^d.
double mh_squared(std::span<const double> xi, double h);

/// Stateless evaluator pinning (d, h); thread-safe.
class SymbolEvaluator {
public:
    SymbolEvaluator(int dim, double h);
    int dim() const { return dim_; }
    double spacing() const { return h_; }
    double squared(std::span<const double> xi) const { return mh_squared(xi, h_); }
    /// M_h(xi)^{2s}; s=0 gives the identity multiplier 1.
    double power(std::span<const double> xi, double s) const;

private:
    int dim_;
    double h_;
};

/// Discrete Fourier data on a PeriodicBox. Amplitude k approximates
/// F_h[u](xi_k) = h^d Σ_x e^{-i xi_k·x} u(x) at xi_k = 2πk/L with k in the
/// centered range (-n/2, n/2] per axis (Nyquist assigned to +π/h).
class SpectrumGrid {
public:
    SpectrumGrid(BoxPtr box, std::vector<std::complex<double>> amplitudes);

    const BoxPtr& box() const { return box_; }
    const std::vector<std::complex<double>>& amplitudes() const { return amp_; }
    std::vector<std::complex<double>>& amplitudes() { return amp_; }
    /// Centered integer frequency index of flat node `flat`.
    std::vector<int> centered_index(long flat) const;
    /// Frequency vector xi_k = 2π k / L for flat node `flat`.
    std::vector<double> frequency(long flat) const;

private:
    BoxPtr box_;
    std::vector<std::complex<double>> amp_;
};

SpectrumGrid dft_forward(const BoxFunction& u);
BoxFunction dft_inverse(const SpectrumGrid& spec);

/// In-place unnormalized complex FFT over an n^dim grid (row-major),
/// sign = -1 forward / +1 backward. Deterministic (FFTW, estimate-only plans,
/// serial execution).
void fft_nd(std::vector<std::complex<double>>& data, int dim, int n, int sign);

/// Closed-form Gaussian pair g(x) = exp(-|x|^2/(2σ^2)),
/// F[g](xi) = (2πσ^2)^{d/2} exp(-σ^2 |xi|^2 / 2).
struct GaussianPair {
    int dim = 1;
    double sigma2 = 0.5;  // σ^2; 0.5 gives g(x) = exp(-|x|^2)

    double eval(std::span<const double> x) const;
    double transform(std::span<const double> xi) const;
};

/// Max over the box's frequency nodes of
/// |F_h[g](xi) - Σ_{|ζ|_∞ <= fold_radius·2π/h} F[g](xi+ζ)|,
/// the test statistic for the Poisson-type summation identity.
/// F_h[g] is evaluated by direct lattice summation over the box sites.
double poisson_fold_check(const GaussianPair& g, const PeriodicBox& box, int fold_radius);

}  // namespace fgf
