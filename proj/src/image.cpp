#include "skesim/image.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "skesim/errors.hpp"

namespace skesim {

std::size_t BinaryImage::foreground_count() const {
  std::size_t n = 0;
  for (std::uint8_t v : fg) {
    n += v != 0;
  }
  return n;
}

int BinaryImage::component_count() const {
  std::vector<std::uint8_t> seen(fg.size(), 0);
  int components = 0;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * width + x;
      if (fg[i] == 0 || seen[i]) {
        continue;
      }
      ++components;
      std::deque<std::pair<int, int>> queue{{x, y}};
      seen[i] = 1;
      while (!queue.empty()) {
        const auto [cx, cy] = queue.front();
        queue.pop_front();
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = cx + dx, ny = cy + dy;
            if (!at(nx, ny)) {
              continue;
            }
            const std::size_t ni = static_cast<std::size_t>(ny) * width + nx;
            if (!seen[ni]) {
              seen[ni] = 1;
              queue.emplace_back(nx, ny);
            }
          }
        }
      }
    }
  }
  return components;
}

namespace {

// Netpbm token scanner: whitespace separates tokens, '#' starts a comment
// running to end of line. Used for all header fields and for plain rasters.
int next_token_int(std::istream& in, const char* what) {
  while (true) {
    const int c = in.peek();
    if (c == EOF) {
      throw IoError(std::string("pgm: unexpected end of file reading ") + what);
    }
    if (c == '#') {
      std::string dummy;
      std::getline(in, dummy);
      continue;
    }
    if (std::isspace(c)) {
      in.get();
      continue;
    }
    break;
  }
  long v = 0;
  if (!(in >> v)) {
    throw IoError(std::string("pgm: malformed ") + what);
  }
  return static_cast<int>(v);
}

}  // namespace

BinaryImage read_pgm_stream(std::istream& in, bool invert) {
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' ||
      (magic[1] != '1' && magic[1] != '2' && magic[1] != '5')) {
    throw IoError("pgm: unsupported format, expected P1, P2 or P5");
  }
  const char kind = magic[1];
  const int width = next_token_int(in, "width");
  const int height = next_token_int(in, "height");
  if (width < 1 || height < 1) {
    throw IoError("pgm: non-positive dimensions");
  }
  long maxval = 1;
  if (kind != '1') {
    maxval = next_token_int(in, "maxval");
    if (maxval < 1 || maxval > 65535) {
      throw IoError("pgm: maxval out of range");
    }
  }

  BinaryImage img(width, height);
  const std::size_t n = static_cast<std::size_t>(width) * height;

  auto store = [&](std::size_t i, long value) {
    bool dark;
    if (kind == '1') {
      dark = value != 0;  // 1 is black in plain bitmaps
    } else {
      dark = value * 255 < 128 * maxval;
    }
    img.fg[i] = (dark != invert) ? 1 : 0;
  };

  if (kind == '5') {
    in.get();  // single whitespace byte after maxval
    const int bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(n * bytes);
    in.read(reinterpret_cast<char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
      throw IoError("pgm: truncated raster");
    }
    for (std::size_t i = 0; i < n; ++i) {
      const long v = bytes == 1
                         ? raw[i]
                         : (long(raw[2 * i]) << 8) | raw[2 * i + 1];
      store(i, v);
    }
  } else if (kind == '2') {
    for (std::size_t i = 0; i < n; ++i) {
      store(i, next_token_int(in, "sample"));
    }
  } else {
    // P1 samples are single digits and need no separating whitespace.
    std::size_t i = 0;
    while (i < n) {
      const int c = in.get();
      if (c == EOF) {
        throw IoError("pgm: truncated raster");
      }
      if (c == '#') {
        std::string dummy;
        std::getline(in, dummy);
        continue;
      }
      if (std::isspace(c)) {
        continue;
      }
      if (c != '0' && c != '1') {
        throw IoError("pgm: bad bitmap sample");
      }
      store(i++, c - '0');
    }
  }
  return img;
}

BinaryImage read_pgm(const std::string& path, bool invert) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open: " + path);
  }
  return read_pgm_stream(in, invert);
}

void write_pbm_stream(const BinaryImage& img, std::ostream& out) {
  out << "P1\n" << img.width << ' ' << img.height << "\n";
  int col = 0;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      out << (img.at(x, y) ? '1' : '0');
      if (++col == 64) {  // plain format lines must stay short
        out << '\n';
        col = 0;
      }
    }
  }
  if (col != 0) {
    out << '\n';
  }
}

void write_pbm(const BinaryImage& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open for writing: " + path);
  }
  write_pbm_stream(img, out);
  if (!out) {
    throw IoError("write failed: " + path);
  }
}

void draw_line(BinaryImage& img, Point2 a, Point2 b) {
  int x0 = static_cast<int>(std::lround(a.x));
  int y0 = static_cast<int>(std::lround(a.y));
  const int x1 = static_cast<int>(std::lround(b.x));
  const int y1 = static_cast<int>(std::lround(b.y));
  const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
  const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  while (true) {
    if (img.in_bounds(x0, y0)) {
      img.set(x0, y0, true);
    }
    if (x0 == x1 && y0 == y1) {
      break;
    }
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

}  // namespace skesim
