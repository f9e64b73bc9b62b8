#include "skesim/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "skesim/errors.hpp"

namespace skesim {

namespace {

constexpr Rgb kWhite{255, 255, 255};
constexpr Rgb kBlack{0, 0, 0};
constexpr Rgb kGray{176, 176, 176};
constexpr Rgb kRed{214, 40, 40};

void draw_segment(RgbImage& img, int x0, int y0, int x1, int y1, Rgb c) {
  const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
  const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  while (true) {
    img.set(x0, y0, c);
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

}  // namespace

RgbImage::RgbImage(int w, int h, Rgb fill) : width(w), height(h) {
  px.assign(static_cast<std::size_t>(w) * h * 3, 0);
  for (std::size_t i = 0; i < px.size(); i += 3) {
    px[i] = fill[0];
    px[i + 1] = fill[1];
    px[i + 2] = fill[2];
  }
}

void write_ppm(const RgbImage& img, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  f << "P6\n" << img.width << " " << img.height << "\n255\n";
  f.write(reinterpret_cast<const char*>(img.px.data()),
          static_cast<std::streamsize>(img.px.size()));
  f.close();
  if (!f) throw IoError("failed writing " + path);
}

RgbImage plot_skeleton(const Skeleton& sk, const RegionBoundary* region,
                       int width) {
  if (sk.node_count() == 0) {
    throw ValidationError("nothing to plot: skeleton has no nodes");
  }
  if (width < 16) {
    throw ValidationError("plot width must be at least 16 pixels");
  }

  double minx = sk.nodes()[0].p.x, maxx = minx;
  double miny = sk.nodes()[0].p.y, maxy = miny;
  auto grow = [&](Point2 p) {
    minx = std::min(minx, p.x);
    maxx = std::max(maxx, p.x);
    miny = std::min(miny, p.y);
    maxy = std::max(maxy, p.y);
  };
  for (const Node& n : sk.nodes()) grow(n.p);
  if (region != nullptr) {
    for (Point2 p : region->polygon) grow(p);
  }

  const double pad = 0.05 * std::max({maxx - minx, maxy - miny, 1.0});
  minx -= pad;
  maxx += pad;
  miny -= pad;
  maxy += pad;
  const double scale = (width - 1) / (maxx - minx);
  const int height =
      std::max(16, static_cast<int>(std::lround((maxy - miny) * scale)) + 1);

  auto to_px = [&](Point2 p) {
    return std::array<int, 2>{
        static_cast<int>(std::lround((p.x - minx) * scale)),
        static_cast<int>(std::lround((maxy - p.y) * scale))};
  };

  RgbImage img(width, height, kWhite);
  if (region != nullptr && region->polygon.size() >= 2) {
    for (std::size_t i = 0; i < region->polygon.size(); ++i) {
      auto a = to_px(region->polygon[i]);
      auto b = to_px(region->polygon[(i + 1) % region->polygon.size()]);
      draw_segment(img, a[0], a[1], b[0], b[1], kGray);
    }
  }
  for (const Edge& e : sk.edges()) {
    auto a = to_px(sk.father_point(e.id));
    auto b = to_px(sk.son_point(e.id));
    draw_segment(img, a[0], a[1], b[0], b[1], kBlack);
  }
  if (sk.root() != kInvalidNode) {
    auto r = to_px(sk.node(sk.root()).p);
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) img.set(r[0] + dx, r[1] + dy, kRed);
  }
  return img;
}

void write_skeleton_ppm(const Skeleton& sk, const RegionBoundary* region,
                        int width, const std::string& path) {
  write_ppm(plot_skeleton(sk, region, width), path);
}

}  // namespace skesim
