#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <memory>
#include <vector>

#include "fgf/grid.hpp"
#include "fgf/spectral.hpp"

namespace fgf {

/// Stencil weights of (-Δ_h)^s: K(m) such that
///   ((-Δ_h)^s u)(x) = Σ_m K(m) u(x - h·m),
/// i.e. K(m) = h^d (2π)^{-d} ∫_{(-π/h,π/h)^d} M_h(ξ)^{2s} e^{iξ·hm} dξ.
/// The integral is a trapezoid sum over q·n_support frequency nodes per axis,
/// evaluated for all offsets at once with one inverse FFT. K scales exactly
/// as K_h(m) = h^{-2s} K_1(m). Exact (up to roundoff) for s in N.
class KernelTable {
public:
    /// radius: largest offset |m_j| stored per axis. q = 0 selects the
    /// auto refinement (>= 4096 nodes/axis in d=1, 256 in d=2, 64 above).
    KernelTable(int dim, double h, double s, std::vector<int> radius, int q = 0);

    int dim() const { return dim_; }
    double spacing() const { return h_; }
    double order() const { return s_; }
    int refinement() const { return q_; }
    int nodes_per_axis() const { return nodes_; }
    const std::vector<int>& radius() const { return radius_; }
    double at(const std::vector<int>& offset) const;
    void dump(std::ostream& os) const;

private:
    int dim_;
    double h_;
    double s_;
    int q_;
    int nodes_;
    std::vector<int> radius_;
    std::vector<int> stride_;
    std::vector<double> values_;
};

/// Single stencil weight; builds a minimal table internally.
double kernel_entry(const std::vector<int>& offset, double h, double s, int q = 0);

/// Dense restricted operator ((-Δ_h)^s)_{x,y in Omega_h} with its Cholesky
/// factor (computed once, immutable afterwards).
class KernelMatrix {
public:
    KernelMatrix(DomainPtr dom, double s, int q = 0);

    const DomainPtr& domain() const { return dom_; }
    double order() const { return s_; }
    const Eigen::MatrixXd& matrix() const { return A_; }
    const Eigen::LLT<Eigen::MatrixXd>& cholesky() const { return llt_; }

private:
    DomainPtr dom_;
    double s_;
    Eigen::MatrixXd A_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
};

KernelMatrix assemble_matrix(DomainPtr dom, double s, int q = 0);

/// (-Δ_h)^s on the periodic box: multiply the discrete spectrum by
/// M_h(ξ_k)^{2s} and invert. s = 0 is the identity.
BoxFunction apply_full_lattice(const BoxFunction& u, double s);

/// Continuous-operator stand-in on the fine box: multiply by |ξ_k|^{2s}
/// (zero at ξ = 0). Used to manufacture f = (-Δ)^s u for smooth u.
BoxFunction apply_continuous_reference(const BoxFunction& u, double s);

/// Max over box sites of |((-Δ_h)^s g)|_{hZ^d} - (-Δ_h)^s(g|_{hZ^d})| for a
/// closed-form Gaussian g: continuous-multiplier path (trapezoid quadrature
/// of M_h(ξ)^{2s} F[g](ξ) over [-T,T]^d, T = fold_radius·2π/h) against the
/// discrete path (box spectrum multiplier).
double commute_check(const GaussianPair& g, double s, const PeriodicBox& box, int fold_radius = 3,
                     int quad_nodes = 0);

}  // namespace fgf
