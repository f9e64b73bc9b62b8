#include "skesim/thinning.hpp"

#include <array>

#include "skesim/errors.hpp"

namespace skesim {

namespace {

// Ring offsets in the order N, NE, E, SE, S, SW, W, NW.
constexpr std::array<std::pair<int, int>, 8> kRing{{
    {0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1},
}};

std::array<bool, 8> ring_of(const BinaryImage& bm, int x, int y) {
  std::array<bool, 8> r;
  for (std::size_t i = 0; i < 8; ++i) {
    r[i] = bm.at(x + kRing[i].first, y + kRing[i].second);
  }
  return r;
}

int ring_count(const std::array<bool, 8>& r) {
  int n = 0;
  for (bool v : r) {
    n += v;
  }
  return n;
}

// Number of 0->1 transitions walking the ring cyclically.
int ring_transitions(const std::array<bool, 8>& r) {
  int n = 0;
  for (std::size_t i = 0; i < 8; ++i) {
    n += !r[i] && r[(i + 1) % 8];
  }
  return n;
}

// Safe to delete: the foreground ring is one cyclic run and non-empty, so
// removal cannot split or erase an 8-component.
bool deletion_safe(const BinaryImage& bm, int x, int y) {
  const auto r = ring_of(bm, x, y);
  const int b = ring_count(r);
  return b >= 1 && ring_transitions(r) == 1;
}

// Exact component count of the foreground ring under 8-adjacency between the
// ring pixels themselves (skip-one pairs through a corner, such as N and E,
// are adjacent even when the pixel between them is background).
int ring_components(const std::array<bool, 8>& r) {
  std::array<int, 8> parent;
  for (int i = 0; i < 8; ++i) {
    parent[i] = i;
  }
  auto find = [&](int i) {
    while (parent[i] != i) {
      i = parent[i] = parent[parent[i]];
    }
    return i;
  };
  for (int i = 0; i < 8; ++i) {
    if (!r[i]) {
      continue;
    }
    for (int j = i + 1; j < 8; ++j) {
      if (!r[j]) {
        continue;
      }
      const int dx = kRing[i].first - kRing[j].first;
      const int dy = kRing[i].second - kRing[j].second;
      if (dx >= -1 && dx <= 1 && dy >= -1 && dy <= 1) {
        parent[find(i)] = find(j);
      }
    }
  }
  int components = 0;
  for (int i = 0; i < 8; ++i) {
    if (r[i] && find(i) == i) {
      ++components;
    }
  }
  return components;
}

bool simple_pixel(const BinaryImage& bm, int x, int y) {
  const auto r = ring_of(bm, x, y);
  return ring_count(r) >= 1 && ring_components(r) == 1;
}

// One thinning subiteration. Candidates are gathered against a snapshot so at
// most one boundary layer disappears per pass; deletions then run in scan
// order with the connectivity guard rechecked against the live bitmap.
bool subiteration(BinaryImage& bm, bool first) {
  std::vector<std::pair<int, int>> candidates;
  for (int y = 0; y < bm.height; ++y) {
    for (int x = 0; x < bm.width; ++x) {
      if (!bm.at(x, y)) {
        continue;
      }
      const auto r = ring_of(bm, x, y);
      const int b = ring_count(r);
      if (b < 2 || b > 6 || ring_transitions(r) != 1) {
        continue;
      }
      const bool n = r[0], e = r[2], s = r[4], w = r[6];
      const bool ok = first ? (!(n && e && s) && !(e && s && w))
                            : (!(n && e && w) && !(n && s && w));
      if (ok) {
        candidates.emplace_back(x, y);
      }
    }
  }
  bool changed = false;
  for (const auto& [x, y] : candidates) {
    if (deletion_safe(bm, x, y)) {
      bm.set(x, y, false);
      changed = true;
    }
  }
  return changed;
}

// Retire 2x2 foreground blocks: delete the first pixel of each block whose
// removal keeps the ring in one piece. A block where no pixel is simple is
// left alone; connectivity outranks thinness there.
bool sweep_blocks(BinaryImage& bm) {
  bool changed = false;
  for (int y = 0; y + 1 < bm.height; ++y) {
    for (int x = 0; x + 1 < bm.width; ++x) {
      if (!(bm.at(x, y) && bm.at(x + 1, y) && bm.at(x, y + 1) &&
            bm.at(x + 1, y + 1))) {
        continue;
      }
      for (const auto& [px, py] : {std::pair{x, y}, {x + 1, y}, {x, y + 1},
                                   {x + 1, y + 1}}) {
        if (simple_pixel(bm, px, py)) {
          bm.set(px, py, false);
          changed = true;
          break;
        }
      }
    }
  }
  return changed;
}

// Retire staircase residue the subiterations never touch: a pixel whose
// foreground ring is a single 8-connected clump spanning more than one cyclic
// run (e.g. the corner of a triangle of pixels on a thinned diagonal). Such a
// pixel is redundant width, and left in place it reads as a fake branch
// point. The ring-in-one-piece test keeps components whole; the four-way
// enclosure test keeps plus-junction centers and never walls in background.
bool sweep_redundant(BinaryImage& bm) {
  bool changed = false;
  for (int y = 0; y < bm.height; ++y) {
    for (int x = 0; x < bm.width; ++x) {
      if (!bm.at(x, y)) {
        continue;
      }
      const auto r = ring_of(bm, x, y);
      if (ring_count(r) < 2 || ring_components(r) != 1) {
        continue;
      }
      if (r[0] && r[2] && r[4] && r[6]) {
        continue;
      }
      bm.set(x, y, false);
      changed = true;
    }
  }
  return changed;
}

}  // namespace

PixelSkeleton thin(const BinaryImage& img) {
  if (img.foreground_count() == 0) {
    throw ValidationError("thin: image has no foreground pixels");
  }
  PixelSkeleton ps{img};
  BinaryImage& bm = ps.mask;
  bool changed = true;
  while (changed) {
    changed = false;
    changed |= subiteration(bm, true);
    changed |= subiteration(bm, false);
    changed |= sweep_blocks(bm);
    changed |= sweep_redundant(bm);
  }
  return ps;
}

PixelClasses classify_pixels(const PixelSkeleton& ps) {
  const BinaryImage& bm = ps.mask;
  PixelClasses out;
  for (int y = 0; y < bm.height; ++y) {
    for (int x = 0; x < bm.width; ++x) {
      if (!bm.at(x, y)) {
        continue;
      }
      const int b = ring_count(ring_of(bm, x, y));
      if (b == 1) {
        out.end_points.emplace_back(x, y);
      } else if (b >= 3) {
        out.branch_points.emplace_back(x, y);
      }
    }
  }
  return out;
}

PixelSkeleton prune_spurs(const PixelSkeleton& ps, int min_len) {
  PixelSkeleton out = ps;
  BinaryImage& bm = out.mask;
  bool changed = true;
  while (changed) {
    changed = false;
    const PixelClasses pc = classify_pixels(out);
    for (const auto& [ex, ey] : pc.end_points) {
      if (!bm.at(ex, ey)) {
        continue;  // consumed by an earlier prune this round
      }
      // Walk from the end point toward the body of the skeleton, collecting
      // spur pixels until a junction stops the walk.
      std::vector<std::pair<int, int>> path{{ex, ey}};
      auto on_path = [&](int qx, int qy) {
        for (const auto& [sx, sy] : path) {
          if (sx == qx && sy == qy) {
            return true;
          }
        }
        return false;
      };
      int px = -1, py = -1, cx = ex, cy = ey;
      bool at_branch = false;
      while (static_cast<int>(path.size()) < min_len) {
        int nx = -1, ny = -1, nbors = 0;
        for (const auto& [dx, dy] : kRing) {
          const int qx = cx + dx, qy = cy + dy;
          if (!bm.at(qx, qy) || (qx == px && qy == py)) {
            continue;
          }
          ++nbors;
          nx = qx;
          ny = qy;
        }
        if (nbors != 1) {
          at_branch = nbors > 1;
          break;
        }
        if (ring_count(ring_of(bm, nx, ny)) >= 3) {
          at_branch = true;
          // A junction pixel whose remaining neighbors (spur removed) form a
          // single run is not a real junction, only fuzz created by the spur
          // touching the main body diagonally; it goes with the spur.
          auto rest = ring_of(bm, nx, ny);
          for (std::size_t i = 0; i < 8; ++i) {
            if (rest[i] && on_path(nx + kRing[i].first, ny + kRing[i].second)) {
              rest[i] = false;
            }
          }
          if (ring_components(rest) <= 1) {
            path.emplace_back(nx, ny);
          }
          break;
        }
        px = cx;
        py = cy;
        cx = nx;
        cy = ny;
        path.emplace_back(cx, cy);
      }
      if (at_branch && static_cast<int>(path.size()) < min_len) {
        for (const auto& [qx, qy] : path) {
          bm.set(qx, qy, false);
        }
        changed = true;
      }
    }
  }
  return out;
}

}  // namespace skesim
