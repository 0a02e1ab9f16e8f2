#include "fgf/eigensolve.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "fgf/error.hpp"
#include "fgf/stats.hpp"

namespace fgf {

SpectralDecomposition decompose(const KernelMatrix& A) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A.matrix());
    if (solver.info() != Eigen::Success) throw Error("decompose: eigensolver did not converge");

    SpectralDecomposition dec;
    dec.domain = A.domain();
    dec.eigenvalues = solver.eigenvalues();
    if (dec.eigenvalues[0] <= 0)
        throw Error("decompose: nonpositive eigenvalue; operator not positive definite");

    double hd = std::pow(dec.domain->spacing(), dec.domain->dim());
    dec.eigenvectors = solver.eigenvectors() / std::sqrt(hd);

    // Residual gate: A v = λ v within 1e-9 λ per mode, plus the
    // backward-stability floor eps·n·||A|| that any dense solver carries
    // (dominant for small λ when the spectrum spans many decades).
    const Eigen::MatrixXd& M = A.matrix();
    const int n = static_cast<int>(dec.eigenvalues.size());
    double floor = 64.0 * n * std::numeric_limits<double>::epsilon() * dec.eigenvalues[n - 1];
    for (int j = 0; j < n; ++j) {
        double lam = dec.eigenvalues[j];
        double res = (M * dec.eigenvectors.col(j) - lam * dec.eigenvectors.col(j)).norm() /
                     dec.eigenvectors.col(j).norm();
        if (res > 1e-9 * lam + floor)
            throw Error("decompose: eigenpair residual exceeds tolerance");
    }
    return dec;
}

GridFunction series_sample(const SpectralDecomposition& dec, RngSpec rng) {
    const int n = static_cast<int>(dec.eigenvalues.size());
    Eigen::VectorXd coeff(n);
    for (int j = 0; j < n; ++j) coeff[j] = rng.normal() / std::sqrt(dec.eigenvalues[j]);
    Eigen::VectorXd phi = dec.eigenvectors * coeff;
    return GridFunction(dec.domain, std::move(phi));
}

Eigen::MatrixXd series_covariance(const SpectralDecomposition& dec) {
    return dec.eigenvectors * dec.eigenvalues.cwiseInverse().asDiagonal() *
           dec.eigenvectors.transpose();
}

double weyl_fit(const SpectralDecomposition& dec, const WeylFitOptions& opt) {
    const int n = static_cast<int>(dec.eigenvalues.size());
    if (n < 30) throw Error("weyl_fit: need at least 30 modes");
    int lo = std::max(2, static_cast<int>(std::lround(opt.window_lo * n)));
    int hi = std::max(lo + 9, static_cast<int>(std::lround(opt.window_hi * n)));
    hi = std::min(hi, n);
    if (hi - lo < 5) throw Error("weyl_fit: window too narrow");

    std::vector<double> x, y;
    x.reserve(hi - lo + 1);
    y.reserve(hi - lo + 1);
    for (int j = lo; j <= hi; ++j) {
        x.push_back(std::log(static_cast<double>(j)));
        y.push_back(std::log(dec.eigenvalues[j - 1]));
    }
    return ls_slope(x, y);
}

}  // namespace fgf
