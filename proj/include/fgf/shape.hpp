#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace fgf {

// Axis-aligned boxes, balls and finite boolean combinations of them.
// Membership is tested against the open set (strict inequalities), so
// lattice points on the boundary count as exterior.
class Shape {
public:
    virtual ~Shape() = default;
    virtual int dim() const = 0;
    virtual bool contains(std::span<const double> x) const = 0;
    // Bounding interval [lo_j, hi_j] per axis (superset of the shape).
    virtual void bounds(std::vector<double>& lo, std::vector<double>& hi) const = 0;
    virtual std::string describe() const = 0;
};

using ShapePtr = std::shared_ptr<const Shape>;

ShapePtr make_box(std::vector<double> lo, std::vector<double> hi);
ShapePtr make_ball(std::vector<double> center, double radius);
ShapePtr make_union(ShapePtr a, ShapePtr b);
ShapePtr make_intersection(ShapePtr a, ShapePtr b);

// Parses descriptors of the form
//   box(lo1,hi1[,lo2,hi2,...])
//   ball(c1[,c2,...];r)
//   union(S;S)  intersect(S;S)
// Throws fgf::Error on malformed input.
ShapePtr parse_shape(const std::string& text);

}  // namespace fgf
