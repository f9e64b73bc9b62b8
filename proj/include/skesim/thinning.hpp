#pragma once

#include <utility>
#include <vector>

#include "skesim/image.hpp"

namespace skesim {

// Two-subiteration morphological thinning (Zhang-Suen neighbor tables) with a
// connectivity guard: deletion candidates come from a snapshot per
// subiteration, but each pixel is only removed if, against the current bitmap,
// its foreground ring still forms a single run and is non-empty. A final
// in-loop sweep retires 2x2 blocks by deleting one simple pixel per block.
// Guarantees: result is a subset of the input foreground, 8-component count is
// preserved, no 2x2 block is entirely foreground, and the operator is
// idempotent. Throws ValidationError on an empty foreground.
PixelSkeleton thin(const BinaryImage& img);

struct PixelClasses {
  // Scan order (y outer, x inner). A skeleton pixel is an end point iff it has
  // exactly one 8-neighbor, a branch point iff it has three or more.
  std::vector<std::pair<int, int>> branch_points;
  std::vector<std::pair<int, int>> end_points;
};

PixelClasses classify_pixels(const PixelSkeleton& ps);

// Removes end-point paths shorter than min_len pixels that terminate at a
// branch pixel; thinning artifacts would otherwise read as fake bifurcations.
// Free-standing lines keep both ends.
PixelSkeleton prune_spurs(const PixelSkeleton& ps, int min_len = 3);

}  // namespace skesim
