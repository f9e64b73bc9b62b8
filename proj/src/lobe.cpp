#include "skesim/lobe.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "skesim/errors.hpp"

namespace skesim {

namespace {

constexpr int kCurveSamples = 4096;  // t-samples per curve
constexpr int kTableSize = 2048;     // uniform-x entries (straddles >= 512)

// Piecewise-linear resample of (x[i], v[i]) onto a uniform x grid. The x
// sequence must be non-decreasing and span [0, L].
std::vector<double> resample_uniform(const std::vector<double>& xs,
                                     const std::vector<double>& vs, double L) {
  std::vector<double> table(kTableSize + 1, 0.0);
  std::size_t seg = 0;
  for (int i = 0; i <= kTableSize; ++i) {
    double x = L * static_cast<double>(i) / kTableSize;
    while (seg + 2 < xs.size() && xs[seg + 1] < x) ++seg;
    double x0 = xs[seg], x1 = xs[seg + 1];
    double v0 = vs[seg], v1 = vs[seg + 1];
    double u = x1 > x0 ? std::clamp((x - x0) / (x1 - x0), 0.0, 1.0) : 0.0;
    table[static_cast<std::size_t>(i)] = v0 + u * (v1 - v0);
  }
  return table;
}

double table_lookup(const std::vector<double>& table, double x, double L) {
  if (x < 0.0 || x > L) return 0.0;
  double pos = x / L * kTableSize;
  auto i = static_cast<std::size_t>(pos);
  if (i >= table.size() - 1) return table.back();
  double u = pos - static_cast<double>(i);
  return table[i] + u * (table[i + 1] - table[i]);
}

void check_template(const std::vector<Point2>& tpl, const char* which,
                    bool y_down) {
  if (tpl.size() < 2)
    throw ValidationError(std::string("lobe: ") + which +
                          " template needs at least 2 points");
  if (std::abs(tpl.front().y) > 1e-12 || std::abs(tpl.back().y) > 1e-12)
    throw ValidationError(std::string("lobe: ") + which +
                          " template must start and end on y=0");
  for (const Point2& p : tpl) {
    if (p.x < -1e-12 || p.x > 1.0 + 1e-12)
      throw ValidationError(std::string("lobe: ") + which +
                            " template x must lie in [0,1]");
    double y = y_down ? -p.y : p.y;
    if (y < -1e-12)
      throw ValidationError(std::string("lobe: ") + which +
                            (y_down ? " template y must be <= 0"
                                    : " template y must be >= 0"));
  }
  if (std::abs(tpl.front().x) > 1e-12 || std::abs(tpl.back().x - 1.0) > 1e-12)
    throw ValidationError(std::string("lobe: ") + which +
                          " template must span x from 0 to 1");
}

}  // namespace

std::vector<Point2> default_outline_template() {
  return {{0, 0}, {0.15, 0.25}, {0.5, 0.5}, {0.85, 0.25}, {1, 0}};
}

std::vector<Point2> default_profile_template() {
  return {{0, 0}, {0.3, -1.0}, {0.7, -1.0}, {1, 0}};
}

double Lobe::w_of_x(double x) const {
  return table_lookup(w_table_, x, params_.length);
}

double Lobe::d_of_x(double x) const {
  return table_lookup(d_table_, x, params_.length);
}

Lobe build_lobe(const LobeParams& p) {
  if (p.length <= 0 || p.width <= 0 || p.depth <= 0)
    throw ValidationError("lobe: length, width and depth must be positive");
  if (p.relief < 0 || p.relief > 1)
    throw ValidationError("lobe: relief must lie in [0,1]");
  if (p.template_degree < 1)
    throw ValidationError("lobe: template_degree must be at least 1");

  std::vector<Point2> outline =
      p.outline_template.empty() ? default_outline_template()
                                 : p.outline_template;
  std::vector<Point2> profile =
      p.profile_template.empty() ? default_profile_template()
                                 : p.profile_template;
  check_template(outline, "outline", false);
  check_template(profile, "profile", true);

  Lobe l;
  l.params_ = p;

  std::vector<Point2> right_ctrl, left_ctrl, prof_ctrl;
  for (const Point2& q : outline) {
    right_ctrl.push_back({q.x * p.length, q.y * p.width});
    left_ctrl.push_back({q.x * p.length, -q.y * p.width});
  }
  for (const Point2& q : profile)
    prof_ctrl.push_back({q.x * p.length, q.y * p.depth});

  int degree = p.template_degree;
  auto fit_degree = [&](std::size_t n_ctrl) {
    return std::min(degree, static_cast<int>(n_ctrl) - 1);
  };
  l.b_right_ = make_clamped_uniform(fit_degree(right_ctrl.size()), right_ctrl);
  l.b_left_ = make_clamped_uniform(fit_degree(left_ctrl.size()), left_ctrl);
  l.profile_ = make_clamped_uniform(fit_degree(prof_ctrl.size()), prof_ctrl);

  auto tabulate = [&](const BSplineCurve& c, bool y_down, const char* which) {
    std::vector<double> xs, vs;
    xs.reserve(kCurveSamples + 1);
    vs.reserve(kCurveSamples + 1);
    double prev_x = -1e-9;
    for (int i = 0; i <= kCurveSamples; ++i) {
      Point2 q = bspline_eval(c, static_cast<double>(i) / kCurveSamples);
      if (q.x < prev_x - 1e-9 * std::max(1.0, p.length))
        throw ValidationError(std::string("lobe: ") + which +
                              " curve is not monotone in x");
      prev_x = std::max(prev_x, q.x);
      xs.push_back(q.x);
      vs.push_back(y_down ? -q.y : q.y);
    }
    return resample_uniform(xs, vs, p.length);
  };
  l.w_table_ = tabulate(l.b_right_, false, "outline");
  l.d_table_ = tabulate(l.profile_, true, "profile");
  l.w_table_.front() = l.w_table_.back() = 0.0;
  l.d_table_.front() = l.d_table_.back() = 0.0;
  return l;
}

bool point_in_lobe(const Lobe& l, double x, double y, double z) {
  Point2 local = l.params().placement.local_from_world({x, y});
  const double lx = local.x, ly = local.y;
  if (lx < 0.0 || lx > l.length()) return false;
  if (z > 0.0) return false;
  const double w = l.w_of_x(lx);
  if (w <= 0.0) return false;
  if (std::abs(ly) > w) return false;
  const double ratio = ly / w;
  const double bottom = -l.d_of_x(lx) * std::sqrt(std::max(0.0, 1.0 - ratio * ratio));
  return z >= bottom;
}

RegionBoundary region_polygon(const Lobe& l, int samples_per_side) {
  if (samples_per_side < 8)
    throw std::invalid_argument("region_polygon: need at least 8 samples per side");

  RegionBoundary region;
  auto push = [&](Point2 world) {
    if (!region.polygon.empty() &&
        (world - region.polygon.back()).norm() <= kGeomEps)
      return;
    region.polygon.push_back(world);
  };
  const Placement& pl = l.params().placement;
  for (int i = 0; i < samples_per_side; ++i) {
    double t = static_cast<double>(i) / (samples_per_side - 1);
    push(pl.world_from_local(bspline_eval(l.b_right(), t)));
  }
  for (int i = samples_per_side - 1; i >= 0; --i) {
    double t = static_cast<double>(i) / (samples_per_side - 1);
    push(pl.world_from_local(bspline_eval(l.b_left(), t)));
  }
  while (region.polygon.size() > 1 &&
         (region.polygon.back() - region.polygon.front()).norm() <= kGeomEps)
    region.polygon.pop_back();

  std::span<const Point2> poly(region.polygon.data(), region.polygon.size());
  if (poly.size() < 3 || !polygon_is_simple(poly) ||
      std::abs(polygon_area(poly)) <= kGeomEps)
    throw ValidationError("lobe: placed outline is not a simple polygon");
  return region;
}

double top_surface(const Lobe& l, double x, double y) {
  if (x < 0.0 || x > l.length())
    throw std::domain_error("top_surface: x outside the lobe");
  const double w = l.w_of_x(x);
  if (std::abs(y) > w)
    throw std::domain_error("top_surface: point outside the outline");
  if (l.params().top_mode == TopMode::kFlat) return 0.0;
  const double ratio = w > 0.0 ? y / w : 0.0;
  const double flank = 1.0 - std::sqrt(std::max(0.0, 1.0 - ratio * ratio));
  return -l.params().relief * l.d_of_x(x) * flank;
}

namespace {

LobeParams params_from_json(const nlohmann::json& j) {
  LobeParams p;
  try {
    if (j.contains("length")) p.length = j.at("length").get<double>();
    if (j.contains("width")) p.width = j.at("width").get<double>();
    if (j.contains("depth")) p.depth = j.at("depth").get<double>();
    if (j.contains("template_degree"))
      p.template_degree = j.at("template_degree").get<int>();
    if (j.contains("relief")) p.relief = j.at("relief").get<double>();
    if (j.contains("top_mode")) {
      std::string mode = j.at("top_mode").get<std::string>();
      if (mode == "flat")
        p.top_mode = TopMode::kFlat;
      else if (mode == "mounded")
        p.top_mode = TopMode::kMounded;
      else
        throw ValidationError("lobe config: top_mode must be flat or mounded");
    }
    if (j.contains("placement")) {
      const auto& pl = j.at("placement");
      if (pl.contains("dx")) p.placement.dx = pl.at("dx").get<double>();
      if (pl.contains("dy")) p.placement.dy = pl.at("dy").get<double>();
      if (pl.contains("rot_deg"))
        p.placement.rot = pl.at("rot_deg").get<double>() * std::numbers::pi / 180.0;
    }
    auto read_pts = [&](const char* key) {
      std::vector<Point2> pts;
      for (const auto& item : j.at(key)) {
        if (!item.is_array() || item.size() != 2)
          throw ValidationError(std::string("lobe config: ") + key +
                                " entries must be [x,y]");
        pts.push_back({item[0].get<double>(), item[1].get<double>()});
      }
      return pts;
    };
    if (j.contains("outline_control_points"))
      p.outline_template = read_pts("outline_control_points");
    if (j.contains("profile_control_points"))
      p.profile_template = read_pts("profile_control_points");
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("lobe config: ") + e.what());
  }
  return p;
}

}  // namespace

LobeParams lobe_params_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("lobe config: ") + e.what());
  }
  return params_from_json(j);
}

LobeParams read_lobe_params_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lobe config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return lobe_params_from_json_text(buf.str());
}

}  // namespace skesim
