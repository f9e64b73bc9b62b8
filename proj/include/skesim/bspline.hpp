#pragma once

#include <vector>

#include "skesim/geometry.hpp"

namespace skesim {

// Clamped B-spline: first and last knots repeat degree+1 times, so the curve
// interpolates its end control points.
struct BSplineCurve {
  int degree = 3;
  std::vector<Point2> control_points;
  std::vector<double> knots;  // size = |control_points| + degree + 1
};

// Knot vector [0,...,0, interior uniform, 1,...,1] for the given control
// count. Requires at least degree+1 control points.
BSplineCurve make_clamped_uniform(int degree, std::vector<Point2> controls);

// Structural check: sizes, ordering, end multiplicities. Throws
// ValidationError on a malformed curve.
void validate_curve(const BSplineCurve& c);

// de Boor evaluation on t in [0,1]; throws std::domain_error outside.
Point2 bspline_eval(const BSplineCurve& c, double t);

}  // namespace skesim
