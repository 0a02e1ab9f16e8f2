#pragma once

#include <Eigen/Core>

#include "fgf/fraclap.hpp"
#include "fgf/grid.hpp"
#include "fgf/rng.hpp"

namespace fgf {

/// Full symmetric eigendecomposition of the restricted operator A with
/// eigenvectors rescaled to be orthonormal in L^2_h (h^d v_jᵀ v_k = δ_jk),
/// eigenvalues ascending and positive.
struct SpectralDecomposition {
    DomainPtr domain;
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;  // column j = v_j, L^2_h-orthonormal
};

SpectralDecomposition decompose(const KernelMatrix& A);

/// Random-series field Σ_j X_j λ_j^{-1/2} v_j with independent standard
/// normals; same law as the precision sampler.
GridFunction series_sample(const SpectralDecomposition& dec, RngSpec rng);

/// Σ_j λ_j^{-1} v_j v_jᵀ, the series covariance (equals (h^d A)^{-1}).
Eigen::MatrixXd series_covariance(const SpectralDecomposition& dec);

struct WeylFitOptions {
    // Sorted-index window as fractions of the mode count. Low modes are
    // domain-dependent and the top of the spectrum is lattice dispersion, so
    // the fit runs over the low bulk.
    double window_lo = 0.03;
    double window_hi = 0.25;
};

/// Least-squares slope of log λ_j against log j over the window; compare to
/// the eigenvalue-growth exponent 2s/d. Requires >= 30 modes.
double weyl_fit(const SpectralDecomposition& dec, const WeylFitOptions& opt = {});

}  // namespace fgf
