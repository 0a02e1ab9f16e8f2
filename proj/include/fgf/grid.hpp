#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <memory>
#include <vector>

#include "fgf/shape.hpp"

namespace fgf {

/// Interior lattice sites of a bounded open set: Omega_h = Omega ∩ hZ^d.
/// Sites are integer multi-indices m with h·m in Omega, stored in
/// lexicographic order. Functions on a LatticeDomain are implicitly
/// extended by zero to the rest of hZ^d.
class LatticeDomain {
public:
    LatticeDomain(ShapePtr shape, double h);

    int dim() const { return dim_; }
    double spacing() const { return h_; }
    const Shape& shape() const { return *shape_; }
    int site_count() const { return static_cast<int>(sites_.size()); }
    const std::vector<std::vector<int>>& sites() const { return sites_; }
    const std::vector<int>& site(int i) const { return sites_[i]; }
    const std::vector<int>& bbox_lo() const { return bbox_lo_; }
    const std::vector<int>& bbox_hi() const { return bbox_hi_; }
    std::vector<double> coordinate(int i) const;
    // Ordinal of site m, or -1 if m is not an interior site.
    int find(const std::vector<int>& m) const;

private:
    ShapePtr shape_;
    double h_;
    int dim_;
    std::vector<std::vector<int>> sites_;
    std::vector<int> bbox_lo_, bbox_hi_;
};

using DomainPtr = std::shared_ptr<const LatticeDomain>;

/// Builds Omega ∩ hZ^d. Throws "empty domain" if no lattice point lies inside.
DomainPtr build_domain(ShapePtr shape, double h);

/// Finite periodic computational box: n sites per axis at spacing h,
/// physical period L = n·h, site j at coordinate h·(origin + j).
class PeriodicBox {
public:
    PeriodicBox(int dim, double h, int sites_per_axis, std::vector<int> origin);

    int dim() const { return dim_; }
    double spacing() const { return h_; }
    int sites_per_axis() const { return n_; }
    double period() const { return n_ * h_; }
    const std::vector<int>& origin() const { return origin_; }
    long site_count() const { return count_; }
    std::vector<double> coordinate(long flat) const;
    std::vector<int> unflatten(long flat) const;
    long flatten(const std::vector<int>& j) const;

private:
    int dim_;
    double h_;
    int n_;
    std::vector<int> origin_;
    long count_;
};

using BoxPtr = std::shared_ptr<const PeriodicBox>;

/// Box sized to hold `dom` with period >= pad_factor × domain diameter,
/// centered on the domain's bounding box. Extra sites keep n even.
BoxPtr make_embedding_box(const LatticeDomain& dom, double pad_factor = 4.0);

/// Real values on the sites of a LatticeDomain (zero off-domain by convention).
struct GridFunction {
    DomainPtr domain;
    Eigen::VectorXd values;

    GridFunction() = default;
    GridFunction(DomainPtr dom, Eigen::VectorXd v);
    static GridFunction zero(DomainPtr dom);
};

/// Real values on every site of a PeriodicBox.
struct BoxFunction {
    BoxPtr box;
    Eigen::VectorXd values;

    BoxFunction() = default;
    BoxFunction(BoxPtr b, Eigen::VectorXd v);
    static BoxFunction zero(BoxPtr b);
};

/// h^d Σ_x u(x) v(x). Domains must match (same object shape, h, sites).
double l2h_inner(const GridFunction& u, const GridFunction& v);
double l2h_inner(const BoxFunction& u, const BoxFunction& v);

/// Copies u onto the box at matching coordinates, zero elsewhere.
/// Requires the box to contain the domain's bounding box; the error
/// message names the minimum feasible n.
BoxFunction embed(const GridFunction& u, BoxPtr box);

/// Reads back the values of a box function at the domain's sites.
GridFunction restrict_to_domain(const BoxFunction& u, DomainPtr dom);

/// Plain-text dump: header with d, h, site count, then "index... value" rows.
void dump_grid_function(const GridFunction& u, std::ostream& os);
GridFunction load_grid_function(std::istream& is, ShapePtr shape);

}  // namespace fgf
