#pragma once

#include <span>
#include <vector>

#include "fgf/grid.hpp"

namespace fgf {

/// Centered cardinal B-spline of order k (unit scale): nonnegative, integral
/// one per axis, support (-k/2, k/2), partition of unity on Z. Tensor product
/// over axes in dimension d.
double bspline_eval_1d(int k, double x);
double bspline_eval(int k, std::span<const double> x);

/// Fourier transform of the centered B-spline under this project's
/// convention: Π_j (sin(xi_j/2)/(xi_j/2))^k, value 1 at xi = 0.
double bspline_ft_1d(int k, double xi);
double bspline_ft(int k, std::span<const double> xi);

/// Normalized C^∞ bump, tensor product of
/// ψ(x) = exp(-1/(1-x^2)) / c on (-1,1), c = ∫ψ. Support (-1,1)^d, integral 1.
double bump_eval_1d(double x);
double bump_eval(std::span<const double> x);

/// Integral-one, symmetric, compactly supported mollifier at scale h:
/// either a B-spline of the given order or the smooth bump.
class Mollifier {
public:
    enum class Kind { BSpline, Bump };

    Mollifier(Kind kind, int order, int dim, double scale);
    static Mollifier bspline(int order, int dim, double scale) {
        return Mollifier(Kind::BSpline, order, dim, scale);
    }
    static Mollifier bump(int dim, double scale) { return Mollifier(Kind::Bump, 0, dim, scale); }

    Kind kind() const { return kind_; }
    int order() const { return order_; }
    int dim() const { return dim_; }
    double scale() const { return h_; }
    /// Half-width of the support per axis, in physical units.
    double support_radius() const;
    /// Θ_h(x) = h^{-d} Θ(x/h).
    double eval(std::span<const double> x) const;
    /// F[Θ_h](xi) = F[Θ](h·xi).
    double ft(std::span<const double> xi) const;

private:
    Kind kind_;
    int order_;
    int dim_;
    double h_;
};

/// (Θ_h * f)(x) by the fine-grid trapezoid rule at a single point; the sum
/// runs over the support window only. The window must fit inside the box
/// without wrapping.
double mollify_convolve_at(const BoxFunction& f_ref, const Mollifier& moll,
                           std::span<const double> x);

/// (Θ_h * f) sampled at the target domain's sites. Requires the fine grid to
/// be at least `min_ratio` times finer than the mollifier scale.
GridFunction mollify_convolve(const BoxFunction& f_ref, const Mollifier& moll, DomainPtr targets,
                              double min_ratio = 8.0);

/// Interpolated field I_h φ_h(x) = Σ_y h^d φ_h(y) Θ_h(x-y) for a B-spline Θ at
/// scale h = φ_h's lattice spacing, sampled on the fine box (direct summation
/// over the <= k^d contributing coefficients per point).
BoxFunction interpolate(const GridFunction& phi, int order, BoxPtr eval_box,
                        double min_ratio = 8.0);

}  // namespace fgf
