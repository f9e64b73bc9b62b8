#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "skesim/skeleton.hpp"
#include "skesim/synthesis.hpp"

namespace skesim {

using Rgb = std::array<std::uint8_t, 3>;

// Row-major RGB raster, row 0 at the top.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> px;  // 3 bytes per pixel

  RgbImage(int w, int h, Rgb fill);
  void set(int x, int y, Rgb c) {
    if (x < 0 || x >= width || y < 0 || y >= height) return;
    std::uint8_t* p = &px[(static_cast<std::size_t>(y) * width + x) * 3];
    p[0] = c[0];
    p[1] = c[1];
    p[2] = c[2];
  }
};

void write_ppm(const RgbImage& img, const std::string& path);

// Diagnostic plot: white background, one-pixel black edges, gray region
// boundary when given, and a red square on the root. World +y points up.
// The image is `width` pixels across; height follows the aspect ratio of the
// drawn extent. Throws ValidationError on an empty skeleton or width < 16.
RgbImage plot_skeleton(const Skeleton& sk, const RegionBoundary* region,
                       int width);

void write_skeleton_ppm(const Skeleton& sk, const RegionBoundary* region,
                        int width, const std::string& path);

}  // namespace skesim
