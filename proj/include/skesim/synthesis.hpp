#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skesim/rng.hpp"
#include "skesim/skeleton.hpp"
#include "skesim/stats.hpp"

namespace skesim {

// Growth area: a simple polygon, typically a dense sampling of a lobe
// outline. Containment tests include the boundary.
struct RegionBoundary {
  std::vector<Point2> polygon;
};

struct GrowthConfig {
  int max_bif_steps = 1;
  Point2 root_point;
  Vec2 root_inflow{0, 1};
  // Initial root mark: 1 spawns two trunks, 2 spawns one (the default).
  int root_mark = 2;
  std::optional<RegionBoundary> region;
  // Proposals whose final (possibly truncated) length falls below this are
  // rejected; slivers would violate the edge-length invariant.
  double min_edge_length = 1.0;
};

struct ProposedEdge {
  NodeId father = kInvalidNode;
  Point2 son_point;
};

enum class InsertOutcome {
  kClean,               // edge added as proposed, son mark 1
  kTruncatedIntersect,  // shortened to the first hit, hit edge split, junction mark 3
  kTruncatedBoundary,   // clipped at the region boundary, son mark 3
  kRejected,            // too short after truncation (or outside); skeleton unchanged
};

struct InsertReport {
  InsertOutcome outcome = InsertOutcome::kRejected;
  EdgeId edge = kInvalidEdge;
  NodeId son = kInvalidNode;
};

// Children proposed by one node. Mark 1 yields two proposals whose angles are
// forced to opposite signs, mark 2 yields one, mark 3 none. Directions rotate
// the node's arrival direction (the root uses its virtual inflow) by angles
// drawn from stats.angle_dist; lengths come from stats.length_dist. Draw
// order per proposal is angle then length.
std::vector<ProposedEdge> propose_children(const Node& node,
                                           const TrainingStats& stats,
                                           Rng& rng);

// Adds one proposed edge, resolving collisions: truncates at the earliest of
// the first skeleton intersection (splitting the hit edge, junction mark 3)
// or the first region-boundary crossing (son mark 3). Throws ValidationError
// when the father is already terminal.
InsertReport insert_edge(Skeleton& sk, const ProposedEdge& pe,
                         const RegionBoundary* region,
                         double min_edge_length);

// One growth sweep: proposals are collected from every mark<3 node present at
// entry, shuffled, then inserted in that order; nodes created mid-step wait
// for the next step. Returns whether anything changed.
bool bif_step(Skeleton& sk, const TrainingStats& stats,
              const GrowthConfig& cfg, Rng& rng);

// Runs bif_step up to cfg.max_bif_steps times, stopping early at a fixed
// point. The result always passes validate().
Skeleton synthesize(const TrainingStats& stats, const GrowthConfig& cfg,
                    std::uint64_t seed);

// Region polygon file: JSON list of [x, y] pairs.
RegionBoundary read_region_json(const std::string& path);
void write_region_json(const RegionBoundary& region, const std::string& path);

// Throws ValidationError on an unusable config (bad region polygon, root
// outside the region, non-positive lengths, root mark not 1 or 2).
void validate_config(const GrowthConfig& cfg, const TrainingStats& stats);

}  // namespace skesim
