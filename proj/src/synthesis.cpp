#include "skesim/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "skesim/errors.hpp"

namespace skesim {

namespace {

// Reusing an endpoint instead of splitting when the hit lands on it keeps the
// split pieces longer than the geometric epsilon.
constexpr double kSnapEps = 1e-9;

const Point2* region_poly_begin(const RegionBoundary* region) {
  return region ? region->polygon.data() : nullptr;
}

bool inside_region(const RegionBoundary* region, Point2 p) {
  if (region == nullptr) return true;
  return point_in_polygon(
      std::span<const Point2>(region_poly_begin(region), region->polygon.size()), p);
}

// Follows out-edges only. Used to refuse insertions that would close a
// directed cycle: a truncation landing on one of the proposer's own ancestor
// edges would route the junction back to the proposer.
bool reaches(const Skeleton& sk, NodeId from, NodeId target) {
  if (from == target) return true;
  std::vector<char> seen(sk.node_count(), 0);
  std::vector<NodeId> stack{from};
  seen[static_cast<std::size_t>(from)] = 1;
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    for (EdgeId e : sk.node(n).out_edges) {
      NodeId s = sk.edge(e).son;
      if (s == target) return true;
      if (!seen[static_cast<std::size_t>(s)]) {
        seen[static_cast<std::size_t>(s)] = 1;
        stack.push_back(s);
      }
    }
  }
  return false;
}

}  // namespace

std::vector<ProposedEdge> propose_children(const Node& node,
                                           const TrainingStats& stats,
                                           Rng& rng) {
  if (node.mark >= 3) return {};
  if (node.alpha.empty())
    throw ValidationError("propose: node has no arrival direction");
  const Vec2 u = node.alpha.front();

  std::vector<ProposedEdge> out;
  double a1 = sample(stats.angle_dist, rng);
  double l1 = sample(stats.length_dist, rng);
  out.push_back({node.id, node.p + l1 * rotated(u, a1)});

  if (node.mark == 1) {
    double a2 = sample(stats.angle_dist, rng);
    double l2 = sample(stats.length_dist, rng);
    // Two trunks must diverge: matching signs flip the second draw.
    if ((a1 >= 0.0) == (a2 >= 0.0)) a2 = -a2;
    out.push_back({node.id, node.p + l2 * rotated(u, a2)});
  }
  return out;
}

InsertReport insert_edge(Skeleton& sk, const ProposedEdge& pe,
                         const RegionBoundary* region,
                         double min_edge_length) {
  if (pe.father < 0 || static_cast<std::size_t>(pe.father) >= sk.node_count())
    throw ValidationError("insert: bad father id");
  if (sk.node(pe.father).mark >= 3)
    throw ValidationError("insert: father node is already terminal");

  const Point2 a = sk.node(pe.father).p;
  const Point2 b = pe.son_point;
  if ((b - a).norm() <= kGeomEps) return {};

  // Earliest structural hit across every existing edge.
  double t_hit = std::numeric_limits<double>::infinity();
  Point2 hit_point;
  EdgeId hit_edge = kInvalidEdge;
  for (const Edge& e : sk.edges()) {
    auto h = segment_intersection(a, b, sk.father_point(e.id), sk.son_point(e.id));
    if (h && h->t < t_hit) {
      t_hit = h->t;
      hit_point = h->point;
      hit_edge = e.id;
    }
  }

  // Earliest escape from the growth region.
  double t_bnd = std::numeric_limits<double>::infinity();
  Point2 bnd_point;
  if (region != nullptr) {
    auto h = first_boundary_crossing(
        std::span<const Point2>(region_poly_begin(region), region->polygon.size()),
        a, b);
    if (h) {
      t_bnd = h->t;
      bnd_point = h->point;
    }
  }

  const bool hits = hit_edge != kInvalidEdge && t_hit <= t_bnd;
  const bool exits = !hits && t_bnd < std::numeric_limits<double>::infinity();

  Point2 end = b;
  if (hits) end = hit_point;
  if (exits) end = bnd_point;

  if ((end - a).norm() < min_edge_length) return {};
  // Guards the containment invariant when the father sits on the boundary and
  // the outward crossing is too close to register.
  if (!inside_region(region, end)) return {};

  InsertReport rep;
  if (hits) {
    const Edge he = sk.edge(hit_edge);
    const bool snap_father = (end - sk.node(he.father).p).norm() <= kSnapEps;
    const bool snap_son = (end - sk.node(he.son).p).norm() <= kSnapEps;
    // Landing on an ancestor edge would close a directed cycle through the
    // junction; the skeleton stays a confluence DAG, so such shots fizzle.
    NodeId downstream = snap_father ? he.father : he.son;
    if (reaches(sk, downstream, pe.father)) return {};

    rep.outcome = InsertOutcome::kTruncatedIntersect;
    NodeId junction;
    if (snap_father) {
      junction = he.father;
    } else if (snap_son) {
      junction = he.son;
    } else {
      junction = sk.split_edge(hit_edge, end);
    }
    rep.son = junction;
    rep.edge = sk.add_edge(pe.father, junction);
    Node& j = sk.node(junction);
    j.mark = 3;
    // A snapped endpoint may sit below the natural terminal count.
    if (std::min(3, j.degree + j.virtual_inflows) < 3) j.forced_terminal = true;
  } else if (exits) {
    rep.outcome = InsertOutcome::kTruncatedBoundary;
    rep.son = sk.add_node(end, 3);
    rep.edge = sk.add_edge(pe.father, rep.son);
    sk.node(rep.son).forced_terminal = true;
  } else {
    rep.outcome = InsertOutcome::kClean;
    rep.son = sk.add_node(end, 1);
    rep.edge = sk.add_edge(pe.father, rep.son);
  }

  Node& f = sk.node(pe.father);
  f.mark = std::min(3, f.mark + 1);
  return rep;
}

bool bif_step(Skeleton& sk, const TrainingStats& stats,
              const GrowthConfig& cfg, Rng& rng) {
  // Snapshot: only nodes alive at entry propose; their children wait a step.
  std::vector<ProposedEdge> proposals;
  const std::size_t entry_count = sk.node_count();
  for (std::size_t i = 0; i < entry_count; ++i) {
    const Node& nd = sk.node(static_cast<NodeId>(i));
    if (nd.mark >= 3) continue;
    auto ps = propose_children(nd, stats, rng);
    proposals.insert(proposals.end(), ps.begin(), ps.end());
  }
  rng.shuffle(proposals);

  const RegionBoundary* region = cfg.region ? &*cfg.region : nullptr;
  bool changed = false;
  for (const ProposedEdge& pe : proposals) {
    // An earlier insertion this step may have landed a junction on the father.
    if (sk.node(pe.father).mark >= 3) continue;
    InsertReport rep = insert_edge(sk, pe, region, cfg.min_edge_length);
    if (rep.outcome != InsertOutcome::kRejected) changed = true;
  }
  return changed;
}

Skeleton synthesize(const TrainingStats& stats, const GrowthConfig& cfg,
                    std::uint64_t seed) {
  validate_config(cfg, stats);
  Rng rng(seed);

  Skeleton sk;
  NodeId root = sk.add_node(cfg.root_point, cfg.root_mark);
  Node& r = sk.node(root);
  r.is_root = true;
  r.virtual_inflows = cfg.root_mark;
  r.alpha.push_back(normalized(cfg.root_inflow));
  sk.set_root(root);

  for (int step = 0; step < cfg.max_bif_steps; ++step)
    if (!bif_step(sk, stats, cfg, rng)) break;

  auto violations = validate(sk);
  if (!violations.empty())
    throw std::logic_error("synthesize produced an invalid skeleton: " +
                           violations.front().code + ": " +
                           violations.front().detail);
  return sk;
}

RegionBoundary read_region_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open region file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("region file " + path + ": " + e.what());
  }
  if (!j.is_array() || j.size() < 3)
    throw ValidationError("region file " + path +
                          ": expected a list of at least 3 [x, y] pairs");
  RegionBoundary region;
  for (const auto& item : j) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_number() ||
        !item[1].is_number())
      throw ValidationError("region file " + path +
                            ": each vertex must be an [x, y] number pair");
    region.polygon.push_back({item[0].get<double>(), item[1].get<double>()});
  }
  return region;
}

void write_region_json(const RegionBoundary& region, const std::string& path) {
  nlohmann::json j = nlohmann::json::array();
  for (const Point2& p : region.polygon) j.push_back({p.x, p.y});
  std::ofstream out(path);
  if (!out) throw IoError("cannot write region file: " + path);
  out << j.dump(2) << '\n';
}

void validate_config(const GrowthConfig& cfg, const TrainingStats& stats) {
  if (cfg.max_bif_steps < 1)
    throw ValidationError("config: max_bif_steps must be at least 1");
  if (cfg.root_mark != 1 && cfg.root_mark != 2)
    throw ValidationError("config: root_mark must be 1 or 2");
  if (cfg.min_edge_length <= 0.0)
    throw ValidationError("config: min_edge_length must be positive");
  if (cfg.root_inflow.norm() <= kGeomEps)
    throw ValidationError("config: root_inflow must be a nonzero direction");
  if (stats.angle_dist.lo > stats.angle_dist.hi ||
      stats.length_dist.lo > stats.length_dist.hi)
    throw ValidationError("config: distribution bounds are inverted");
  if (stats.length_dist.lo <= 0.0)
    throw ValidationError("config: edge lengths must be positive");
  if (cfg.region) {
    std::span<const Point2> poly(cfg.region->polygon.data(),
                                 cfg.region->polygon.size());
    if (poly.size() < 3)
      throw ValidationError("config: region polygon needs at least 3 vertices");
    if (!polygon_is_simple(poly))
      throw ValidationError("config: region polygon must be simple");
    if (std::abs(polygon_area(poly)) <= kGeomEps)
      throw ValidationError("config: region polygon has no area");
    if (!point_in_polygon(poly, cfg.root_point))
      throw ValidationError("config: root_point lies outside the region");
  }
}

}  // namespace skesim
