#include "skesim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace skesim {

namespace {

// Relative threshold deciding when two direction vectors count as parallel.
constexpr double kParallelEps = 1e-12;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

double Vec2::norm() const { return std::hypot(x, y); }

double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

Vec2 normalized(Vec2 v) {
  const double n = v.norm();
  if (n <= kGeomEps) {
    throw std::invalid_argument("normalized: zero-length vector");
  }
  return {v.x / n, v.y / n};
}

Vec2 rotated(Vec2 v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {v.x * c - v.y * s, v.x * s + v.y * c};
}

double signed_angle(Vec2 u, Vec2 v) {
  if (u.norm() <= kGeomEps || v.norm() <= kGeomEps) {
    throw std::invalid_argument("signed_angle: zero-length vector");
  }
  double a = std::atan2(cross(u, v), dot(u, v));
  if (a <= -std::numbers::pi) {
    a = std::numbers::pi;  // collapse the branch cut so the range is (-pi, pi]
  }
  return a;
}

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Vec2 ab = b - a;
  const double len_sq = ab.norm_sq();
  if (len_sq <= kGeomEps * kGeomEps) {
    return (p - a).norm();
  }
  const double t = clamp01(dot(p - a, ab) / len_sq);
  return (p - (a + t * ab)).norm();
}

std::optional<SegmentHit> segment_intersection(Point2 a1, Point2 a2, Point2 b1,
                                               Point2 b2) {
  const Vec2 d1 = a2 - a1;
  const Vec2 d2 = b2 - b1;
  const double la = d1.norm();
  const double lb = d2.norm();
  if (la <= kGeomEps || lb <= kGeomEps) {
    throw std::invalid_argument("segment_intersection: degenerate segment");
  }

  const double t_tol = kGeomEps / la;  // parameter step matching kGeomEps in space
  const double u_tol = kGeomEps / lb;
  const Vec2 w = b1 - a1;
  const double denom = cross(d1, d2);

  if (std::abs(denom) > kParallelEps * la * lb) {
    const double t = cross(w, d2) / denom;
    const double u = cross(w, d1) / denom;
    if (u < -u_tol || u > 1.0 + u_tol) {
      return std::nullopt;
    }
    if (t <= t_tol || t > 1.0 + t_tol) {
      return std::nullopt;
    }
    const double tc = clamp01(t);
    return SegmentHit{a1 + tc * d1, tc};
  }

  // Parallel. Only collinear segments can touch.
  if (std::abs(cross(d1, w)) / la > kGeomEps) {
    return std::nullopt;
  }
  const double inv = 1.0 / d1.norm_sq();
  const double s1 = dot(b1 - a1, d1) * inv;
  const double s2 = dot(b2 - a1, d1) * inv;
  const double lo = std::max(0.0, std::min(s1, s2));
  const double hi = std::min(1.0, std::max(s1, s2));
  if (hi < lo - t_tol) {
    return std::nullopt;  // disjoint along the shared line
  }
  if (hi <= t_tol) {
    return std::nullopt;  // contact confined to a1
  }
  const double t = clamp01(lo);
  return SegmentHit{a1 + t * d1, t};
}

ContactReport classify_segment_contact(Point2 a1, Point2 a2, Point2 b1,
                                       Point2 b2) {
  const Vec2 d1 = a2 - a1;
  const Vec2 d2 = b2 - b1;
  const double la = d1.norm();
  const double lb = d2.norm();
  if (la <= kGeomEps || lb <= kGeomEps) {
    throw std::invalid_argument("classify_segment_contact: degenerate segment");
  }

  const double t_tol = kGeomEps / la;
  const double u_tol = kGeomEps / lb;
  const Vec2 w = b1 - a1;
  const double denom = cross(d1, d2);

  if (std::abs(denom) > kParallelEps * la * lb) {
    const double t = cross(w, d2) / denom;
    const double u = cross(w, d1) / denom;
    if (t < -t_tol || t > 1.0 + t_tol || u < -u_tol || u > 1.0 + u_tol) {
      return {SegmentContact::kNone, {}};
    }
    return {SegmentContact::kPoint, a1 + clamp01(t) * d1};
  }

  if (std::abs(cross(d1, w)) / la > kGeomEps) {
    return {SegmentContact::kNone, {}};
  }
  const double inv = 1.0 / d1.norm_sq();
  const double s1 = dot(b1 - a1, d1) * inv;
  const double s2 = dot(b2 - a1, d1) * inv;
  const double lo = std::max(0.0, std::min(s1, s2));
  const double hi = std::min(1.0, std::max(s1, s2));
  if (hi < lo - t_tol) {
    return {SegmentContact::kNone, {}};
  }
  if (hi - lo <= t_tol) {
    return {SegmentContact::kPoint, a1 + clamp01(0.5 * (lo + hi)) * d1};
  }
  return {SegmentContact::kOverlap, a1 + clamp01(lo) * d1};
}

double polygon_area(std::span<const Point2> poly) {
  double twice = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = poly[i];
    const Point2 b = poly[(i + 1) % n];
    twice += cross(a, b);
  }
  return 0.5 * twice;
}

bool polygon_is_simple(std::span<const Point2> poly) {
  const std::size_t n = poly.size();
  if (n < 3) {
    return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if ((poly[(i + 1) % n] - poly[i]).norm() <= kGeomEps) {
      return false;  // repeated vertex
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      const Point2 a1 = poly[i];
      const Point2 a2 = poly[(i + 1) % n];
      const Point2 b1 = poly[j];
      const Point2 b2 = poly[(j + 1) % n];
      const ContactReport c = classify_segment_contact(a1, a2, b1, b2);
      if (c.kind == SegmentContact::kNone) {
        continue;
      }
      if (!adjacent || c.kind == SegmentContact::kOverlap) {
        return false;
      }
      const Point2 shared = (j == i + 1) ? poly[j] : poly[0];
      if ((c.point - shared).norm() > kGeomEps) {
        return false;
      }
    }
  }
  return true;
}

bool point_in_polygon(std::span<const Point2> poly, Point2 p) {
  const std::size_t n = poly.size();
  if (n < 3) {
    return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (point_segment_distance(p, poly[i], poly[(i + 1) % n]) <= kGeomEps) {
      return true;
    }
  }
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2 a = poly[i];
    const Point2 b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_int = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_int) {
        inside = !inside;
      }
    }
  }
  return inside;
}

std::optional<SegmentHit> first_boundary_crossing(std::span<const Point2> poly,
                                                  Point2 p, Point2 q) {
  const Vec2 d = q - p;
  const double len = d.norm();
  if (len <= kGeomEps) {
    return std::nullopt;
  }
  const double t_tol = kGeomEps / len;
  const std::size_t n = poly.size();
  std::optional<SegmentHit> best;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 b1 = poly[i];
    const Point2 b2 = poly[(i + 1) % n];
    const Vec2 e = b2 - b1;
    const double le = e.norm();
    if (le <= kGeomEps) {
      continue;
    }
    const double denom = cross(d, e);
    if (std::abs(denom) <= kParallelEps * len * le) {
      continue;  // sliding along the boundary never counts as an exit
    }
    const double t = cross(b1 - p, e) / denom;
    const double u = cross(b1 - p, d) / denom;
    const double u_tol = kGeomEps / le;
    if (u < -u_tol || u > 1.0 + u_tol) {
      continue;
    }
    if (t <= t_tol || t > 1.0 + t_tol) {
      continue;
    }
    const double tc = std::clamp(t, 0.0, 1.0);
    if (!best || tc < best->t) {
      best = SegmentHit{p + tc * d, tc};
    }
  }
  return best;
}

}  // namespace skesim
