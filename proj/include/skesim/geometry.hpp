#pragma once

#include <optional>
#include <span>
#include <vector>

namespace skesim {

// Absolute tolerance for geometric predicates, in grid units. Coordinates stay
// O(image size) throughout the pipeline, so one absolute epsilon serves every
// comparison in the project.
inline constexpr double kGeomEps = 1e-9;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
  friend bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }

  double norm() const;
  double norm_sq() const { return x * x + y * y; }
};

using Point2 = Vec2;

double dot(Vec2 a, Vec2 b);
double cross(Vec2 a, Vec2 b);

// Throws std::invalid_argument when |v| is below tolerance.
Vec2 normalized(Vec2 v);

// Counter-clockwise rotation of v by angle radians.
Vec2 rotated(Vec2 v, double angle);

// Counter-clockwise rotation taking u onto v, in (-pi, pi].
// Inputs need not be unit length but must be non-zero.
double signed_angle(Vec2 u, Vec2 v);

double point_segment_distance(Point2 p, Point2 a, Point2 b);

struct SegmentHit {
  Point2 point;
  double t = 0.0;  // parameter along the query segment: a1 + t * (a2 - a1)
};

// First contact of segment a with segment b, walking from a1 toward a2.
// Contacts at a1 itself are never reported: edges legally touch at the node
// they grow from. Collinear overlap reports the overlap point nearest a1,
// which degenerates to t = 0 when the overlap already starts at a1.
// Throws std::invalid_argument on zero-length input segments.
std::optional<SegmentHit> segment_intersection(Point2 a1, Point2 a2, Point2 b1,
                                               Point2 b2);

enum class SegmentContact { kNone, kPoint, kOverlap };

struct ContactReport {
  SegmentContact kind = SegmentContact::kNone;
  Point2 point;  // contact point (kPoint) or overlap point nearest a1 (kOverlap)
};

// Symmetric contact classification with endpoint contacts included. Planarity
// validation uses this to tell legal node touches from genuine crossings.
ContactReport classify_segment_contact(Point2 a1, Point2 a2, Point2 b1,
                                       Point2 b2);

// Signed shoelace area; positive for counter-clockwise winding.
double polygon_area(std::span<const Point2> poly);

// True when no two non-adjacent edges touch and adjacent edges touch only at
// their shared vertex. Polygons with repeated consecutive vertices fail.
bool polygon_is_simple(std::span<const Point2> poly);

// Boundary-inclusive point-in-closed-polygon test.
bool point_in_polygon(std::span<const Point2> poly, Point2 p);

// Earliest crossing of [p, q] with the polygon boundary; p is assumed inside.
// Crossings at p itself are not reported.
std::optional<SegmentHit> first_boundary_crossing(std::span<const Point2> poly,
                                                  Point2 p, Point2 q);

}  // namespace skesim
