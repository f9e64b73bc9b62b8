#pragma once

#include <string>
#include <vector>

#include "skesim/skeleton.hpp"
#include "skesim/thinning.hpp"

namespace skesim {

struct ExtractResult {
  Skeleton skeleton;
  // Non-fatal degradations, e.g. loops in the pixel skeleton dropped to keep
  // the graph a tree.
  std::vector<std::string> warnings;
};

// Builds the training graph from a pixel skeleton. Branch and end pixels
// become nodes (clusters within 2 px merge, the node sits at the cluster
// centroid); every maximal pixel path between two node pixels becomes one
// straight edge. Edges are oriented away from the node nearest root_hint by
// breadth-first traversal, marks are incident-edge counts clamped to 3.
// Throws ValidationError when the skeleton is disconnected (message lists the
// component sizes), when root_hint is more than 5 px from every skeleton
// pixel, or when the skeleton has no end or branch pixels at all.
ExtractResult extract_graph(const PixelSkeleton& ps, Point2 root_hint);

}  // namespace skesim
