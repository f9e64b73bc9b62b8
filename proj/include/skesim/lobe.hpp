#pragma once

#include <string>
#include <vector>

#include "skesim/bspline.hpp"
#include "skesim/geometry.hpp"
#include "skesim/synthesis.hpp"

namespace skesim {

// Position of a lobe in the world grid: rotate about z, then translate.
struct Placement {
  double dx = 0.0;
  double dy = 0.0;
  double rot = 0.0;  // radians, counter-clockwise

  Point2 world_from_local(Point2 p) const {
    Point2 r = rotated(p, rot);
    return {r.x + dx, r.y + dy};
  }
  Point2 local_from_world(Point2 p) const {
    return rotated(Point2{p.x - dx, p.y - dy}, -rot);
  }
};

enum class TopMode { kFlat, kMounded };

// Templates are given in unit fractions: x in [0,1] scales by L, outline y
// scales by W (0.5 meaning the full half-width W/2), profile y scales by D
// and must be non-positive. Both must start and end on y = 0.
struct LobeParams {
  double length = 100.0;
  double width = 40.0;
  double depth = 10.0;
  int template_degree = 3;
  std::vector<Point2> outline_template;  // empty selects the default teardrop
  std::vector<Point2> profile_template;  // empty selects the default basin
  Placement placement;
  TopMode top_mode = TopMode::kFlat;
  double relief = 0.5;  // used by the mounded top only, in [0,1]
};

std::vector<Point2> default_outline_template();
std::vector<Point2> default_profile_template();

// The built lobe keeps the curves plus dense x-indexed half-width and depth
// tables so membership is a table lookup, not a root find.
class Lobe {
 public:
  const LobeParams& params() const { return params_; }
  const BSplineCurve& b_right() const { return b_right_; }
  const BSplineCurve& b_left() const { return b_left_; }
  const BSplineCurve& profile() const { return profile_; }

  double length() const { return params_.length; }
  // Half width at local x, linear between table samples, 0 outside [0, L].
  double w_of_x(double x) const;
  // Bottom depth (positive down) at local x.
  double d_of_x(double x) const;

  friend Lobe build_lobe(const LobeParams& p);

 private:
  LobeParams params_;
  BSplineCurve b_right_, b_left_, profile_;
  std::vector<double> w_table_, d_table_;  // uniform x grid over [0, L]
};

// Scales the templates by (L, W, D), validates x-monotonicity, and samples
// the curves into the lookup tables. Throws ValidationError on bad params or
// templates.
Lobe build_lobe(const LobeParams& p);

// Membership of a world-frame 3D point: inside the outline, below z = 0, and
// above the quarter-ellipse bottom. Boundary equality counts as inside;
// cross-sections with zero half-width contain nothing.
bool point_in_lobe(const Lobe& l, double x, double y, double z);

// Growth region for the synthesis stage: b_right sampled forward, b_left
// backward, in world coordinates. Throws ValidationError when the placed
// outline is not a simple polygon with positive area.
RegionBoundary region_polygon(const Lobe& l, int samples_per_side);

// Top of the deposit at a local (x, y) inside the outline: 0 when flat,
// a crest-to-margin mound scaled by relief otherwise.
// Throws std::domain_error outside the outline.
double top_surface(const Lobe& l, double x, double y);

// Lobe config JSON: {"length", "width", "depth", "placement": {"dx", "dy",
// "rot_deg"}, "top_mode": "flat"|"mounded", "relief", optional
// "outline_control_points"/"profile_control_points" ([[x,y],...]) and
// "template_degree"}. Missing keys keep defaults.
LobeParams read_lobe_params_json(const std::string& path);
LobeParams lobe_params_from_json_text(const std::string& text);

}  // namespace skesim
