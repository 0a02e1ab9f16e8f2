#pragma once

#include <string>

#include "fgf/fraclap.hpp"
#include "fgf/grid.hpp"
#include "fgf/mollify.hpp"

namespace fgf {

enum class SolveMethod { Direct, Iterative };

struct DirichletProblem {
    const KernelMatrix* op = nullptr;
    GridFunction rhs;  // Θ_h * f restricted to Omega_h
};

/// Direct: Cholesky solve. Iterative: Jacobi-preconditioned conjugate
/// gradient to relative residual <= tol, iteration cap 20·n; non-convergence
/// throws with the residual history in the message.
GridFunction solve_dirichlet(const DirichletProblem& p, SolveMethod method = SolveMethod::Direct,
                             double tol = 1e-10);

struct NormRequest {
    double sigma = 0.0;
    bool homogeneous = true;
    int oversampling = 8;    // Q: frequency oversampling factor
    double pad_factor = 4.0; // embedding box period per domain diameter
};

/// Full-lattice discrete Sobolev norm of the zero-extension of u:
/// ||u||_{σ} = ( (2π)^{-d} ∫ W(ξ) |F_h u(ξ)|^2 dξ )^{1/2} over (-π/h,π/h)^d,
/// W = M_h^{2σ} (homogeneous) or (1+M_h^2)^σ, evaluated by trapezoid
/// quadrature on a Q-times oversampled embedding box. For homogeneous σ < 0
/// the ξ=0 node is excluded; σ <= -d/2 with nonzero total mass is rejected
/// as divergent.
double sobolev_norm_full_lattice(const GridFunction& u, const NormRequest& req);

/// ||f||_{Ḣ^{-s}_h(Omega_h)} = sqrt(h^d fᵀ A^{-1} f) via the cached Cholesky.
double dual_norm_restricted(const GridFunction& f, const KernelMatrix& A);

struct ErrorFunctionalOptions {
    int oversampling = 8;
    double pad_factor = 4.0;
    double min_ratio = 8.0;  // required fine-grid refinement relative to h
};

/// ||θ_h*u - u_h||_{Ḣ^s_h(hZ^d)}: convolves the fine-grid reference u with
/// the mollifier θ at scale h, samples on hZ^d, subtracts the zero-extended
/// u_h and evaluates the full-lattice norm at exponent s.
double error_functional(const BoxFunction& u_ref, const GridFunction& u_h,
                        const Mollifier& theta, double s,
                        const ErrorFunctionalOptions& opt = {});

}  // namespace fgf
