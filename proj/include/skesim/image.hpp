#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "skesim/geometry.hpp"

namespace skesim {

// Row-major boolean raster; true marks channel material.
struct BinaryImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> fg;

  BinaryImage() = default;
  BinaryImage(int w, int h)
      : width(w), height(h), fg(static_cast<std::size_t>(w) * h, 0) {}

  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width && y >= 0 && y < height;
  }
  // Out-of-bounds reads are background, which lets neighborhood code skip
  // border special cases.
  bool at(int x, int y) const {
    return in_bounds(x, y) &&
           fg[static_cast<std::size_t>(y) * width + x] != 0;
  }
  void set(int x, int y, bool v) {
    fg[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
  }

  std::size_t foreground_count() const;
  // 8-connected foreground components.
  int component_count() const;

  friend bool operator==(const BinaryImage& a, const BinaryImage& b) {
    return a.width == b.width && a.height == b.height && a.fg == b.fg;
  }
};

// One-pixel-wide reduction of a BinaryImage; same raster shape.
struct PixelSkeleton {
  BinaryImage mask;
};

// Netpbm readers, formats P1 (plain bitmap), P2 (plain graymap) and P5 (raw
// graymap). Dark pixels are foreground by default: sample 1 for P1, scaled
// value below 128/255 of maxval for graymaps. invert flips the convention.
BinaryImage read_pgm(const std::string& path, bool invert = false);
BinaryImage read_pgm_stream(std::istream& in, bool invert = false);

// Plain P1 output, foreground written as 1 (black).
void write_pbm(const BinaryImage& img, const std::string& path);
void write_pbm_stream(const BinaryImage& img, std::ostream& out);

// 1 px Bresenham segment, endpoints rounded to nearest pixel and clipped.
void draw_line(BinaryImage& img, Point2 a, Point2 b);

}  // namespace skesim
