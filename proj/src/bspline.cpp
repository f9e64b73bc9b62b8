#include "skesim/bspline.hpp"

#include <algorithm>
#include <stdexcept>

#include "skesim/errors.hpp"

namespace skesim {

BSplineCurve make_clamped_uniform(int degree, std::vector<Point2> controls) {
  if (degree < 1) throw ValidationError("bspline: degree must be at least 1");
  const int n = static_cast<int>(controls.size()) - 1;
  if (n < degree)
    throw ValidationError("bspline: need at least degree+1 control points");

  BSplineCurve c;
  c.degree = degree;
  c.control_points = std::move(controls);
  c.knots.assign(static_cast<std::size_t>(n + degree + 2), 0.0);
  const int spans = n - degree + 1;  // interior intervals between the clamps
  for (int j = degree + 1; j <= n; ++j)
    c.knots[static_cast<std::size_t>(j)] =
        static_cast<double>(j - degree) / spans;
  for (int j = n + 1; j <= n + degree + 1; ++j)
    c.knots[static_cast<std::size_t>(j)] = 1.0;
  return c;
}

void validate_curve(const BSplineCurve& c) {
  if (c.degree < 1) throw ValidationError("bspline: degree must be at least 1");
  const std::size_t n_ctrl = c.control_points.size();
  if (n_ctrl < static_cast<std::size_t>(c.degree) + 1)
    throw ValidationError("bspline: need at least degree+1 control points");
  if (c.knots.size() != n_ctrl + static_cast<std::size_t>(c.degree) + 1)
    throw ValidationError("bspline: knot count must be controls+degree+1");
  if (!std::is_sorted(c.knots.begin(), c.knots.end()))
    throw ValidationError("bspline: knots must be non-decreasing");
  for (int j = 0; j <= c.degree; ++j) {
    if (c.knots[static_cast<std::size_t>(j)] != c.knots.front() ||
        c.knots[c.knots.size() - 1 - static_cast<std::size_t>(j)] !=
            c.knots.back())
      throw ValidationError("bspline: ends must be clamped");
  }
  if (c.knots.front() == c.knots.back())
    throw ValidationError("bspline: knot range is empty");
}

Point2 bspline_eval(const BSplineCurve& c, double t) {
  if (t < 0.0 || t > 1.0)
    throw std::domain_error("bspline_eval: t outside [0,1]");
  validate_curve(c);

  const int p = c.degree;
  const int n = static_cast<int>(c.control_points.size()) - 1;
  const double u = c.knots.front() + t * (c.knots.back() - c.knots.front());

  int k;
  if (u >= c.knots[static_cast<std::size_t>(n + 1)]) {
    k = n;
  } else {
    k = static_cast<int>(std::upper_bound(c.knots.begin(), c.knots.end(), u) -
                         c.knots.begin()) -
        1;
    k = std::clamp(k, p, n);
  }

  std::vector<Point2> d(static_cast<std::size_t>(p) + 1);
  for (int j = 0; j <= p; ++j)
    d[static_cast<std::size_t>(j)] =
        c.control_points[static_cast<std::size_t>(k - p + j)];

  for (int r = 1; r <= p; ++r) {
    for (int j = p; j >= r; --j) {
      const double lo = c.knots[static_cast<std::size_t>(j + k - p)];
      const double hi = c.knots[static_cast<std::size_t>(j + 1 + k - r)];
      const double den = hi - lo;
      const double alpha = den > 0.0 ? (u - lo) / den : 0.0;
      d[static_cast<std::size_t>(j)] =
          (1.0 - alpha) * d[static_cast<std::size_t>(j - 1)] +
          alpha * d[static_cast<std::size_t>(j)];
    }
  }
  return d[static_cast<std::size_t>(p)];
}

}  // namespace skesim
