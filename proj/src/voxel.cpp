#include "skesim/voxel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "skesim/errors.hpp"

namespace skesim {

namespace {

// One edge prepared for membership queries: endpoints, tapered sizes and a
// padded 2D bounding box for the column prefilter.
struct EdgeBand {
  Point2 a, b;
  double w = 0.0;
  double d = 0.0;
  double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;
};

std::vector<EdgeBand> make_bands(const Skeleton& sk, const ChannelParams& cp) {
  const std::vector<int> gens = edge_generations(sk);
  int max_gen = 0;
  for (int g : gens) max_gen = std::max(max_gen, g);
  std::vector<double> scale(static_cast<std::size_t>(max_gen) + 1, 1.0);
  for (std::size_t g = 1; g < scale.size(); ++g) {
    scale[g] = scale[g - 1] * cp.taper;
  }

  std::vector<EdgeBand> bands;
  bands.reserve(sk.edge_count());
  for (const Edge& e : sk.edges()) {
    EdgeBand b;
    b.a = sk.father_point(e.id);
    b.b = sk.son_point(e.id);
    const double s = scale[static_cast<std::size_t>(gens[static_cast<std::size_t>(e.id)])];
    b.w = cp.half_width * s;
    b.d = cp.depth * s;
    b.x0 = std::min(b.a.x, b.b.x) - b.w;
    b.x1 = std::max(b.a.x, b.b.x) + b.w;
    b.y0 = std::min(b.a.y, b.b.y) - b.w;
    b.y1 = std::max(b.a.y, b.b.y) + b.w;
    bands.push_back(b);
  }
  return bands;
}

bool band_member(const EdgeBand& b, double x, double y, double z) {
  if (z > 0.0) return false;
  const double t = point_segment_distance({x, y}, b.a, b.b);
  if (t > b.w || b.w <= 0.0) return false;
  const double r = t / b.w;
  const double drop = b.d * std::sqrt(std::max(0.0, 1.0 - r * r));
  return z >= -drop;
}

void check_spec(const GridSpec& spec) {
  if (spec.dims[0] < 1 || spec.dims[1] < 1 || spec.dims[2] < 1) {
    throw ValidationError("grid dims must all be at least 1");
  }
  if (!(spec.spacing > 0.0)) {
    throw ValidationError("grid spacing must be positive");
  }
  const std::size_t cells = static_cast<std::size_t>(spec.dims[0]) *
                            static_cast<std::size_t>(spec.dims[1]) *
                            static_cast<std::size_t>(spec.dims[2]);
  if (cells > (std::size_t{1} << 31)) {
    throw ValidationError("grid of " + std::to_string(cells) +
                          " cells exceeds the 2^31 limit");
  }
}

}  // namespace

LabeledGrid3::LabeledGrid3(const GridSpec& spec) : spec_(spec) {
  check_spec(spec);
  labels_.assign(static_cast<std::size_t>(spec.dims[0]) * spec.dims[1] *
                     spec.dims[2],
                 0);
}

std::size_t LabeledGrid3::count(std::uint8_t label) const {
  return static_cast<std::size_t>(
      std::count(labels_.begin(), labels_.end(), label));
}

std::vector<int> edge_generations(const Skeleton& sk) {
  std::vector<int> depth(sk.node_count(), 0);
  std::vector<char> seen(sk.node_count(), 0);
  std::vector<NodeId> queue;

  if (sk.root() != kInvalidNode) {
    queue.push_back(sk.root());
    seen[static_cast<std::size_t>(sk.root())] = 1;
  } else {
    for (const Node& n : sk.nodes()) {
      if (n.in_edges.empty()) {
        queue.push_back(n.id);
        seen[static_cast<std::size_t>(n.id)] = 1;
      }
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Node& n = sk.node(queue[head]);
    for (EdgeId e : n.out_edges) {
      const NodeId son = sk.edge(e).son;
      if (!seen[static_cast<std::size_t>(son)]) {
        seen[static_cast<std::size_t>(son)] = 1;
        depth[static_cast<std::size_t>(son)] = depth[static_cast<std::size_t>(n.id)] + 1;
        queue.push_back(son);
      }
    }
  }

  std::vector<int> gens(sk.edge_count(), 0);
  for (const Edge& e : sk.edges()) {
    gens[static_cast<std::size_t>(e.id)] = depth[static_cast<std::size_t>(e.father)];
  }
  return gens;
}

bool point_in_channel(const Skeleton& sk, const ChannelParams& cp, double x,
                      double y, double z) {
  for (const EdgeBand& b : make_bands(sk, cp)) {
    if (band_member(b, x, y, z)) return true;
  }
  return false;
}

bool point_in_projected_channel(const Skeleton& sk, const ChannelParams& cp,
                                const Lobe& lobe, double x, double y,
                                double z) {
  const Point2 local = lobe.params().placement.local_from_world({x, y});
  const double w = lobe.w_of_x(local.x);
  if (w <= 0.0 || std::abs(local.y) > w) return false;
  const double zt = top_surface(lobe, local.x, local.y);
  return point_in_channel(sk, cp, x, y, z - zt);
}

LabeledGrid3 rasterize(const Lobe& lobe, std::span<const ChannelSystem> systems,
                       const GridSpec& spec,
                       std::vector<std::string>* warnings) {
  LabeledGrid3 grid(spec);

  std::vector<EdgeBand> bands;
  for (std::size_t s = 0; s < systems.size(); ++s) {
    const ChannelParams& cp = systems[s].channel;
    if (!(cp.half_width > 0.0) || !(cp.depth > 0.0)) {
      throw ValidationError("channel half_width and depth must be positive");
    }
    if (!(cp.taper > 0.0) || cp.taper > 1.0) {
      throw ValidationError("channel taper must lie in (0, 1]");
    }
    if (warnings != nullptr &&
        spec.spacing > std::min(cp.half_width, cp.depth)) {
      warnings->push_back("grid spacing " + std::to_string(spec.spacing) +
                          " is coarser than the cross-section of system " +
                          std::to_string(s) + "; channels may alias");
    }
    std::vector<EdgeBand> sys = make_bands(systems[s].skeleton, cp);
    bands.insert(bands.end(), sys.begin(), sys.end());
  }

  const int nx = spec.dims[0], ny = spec.dims[1], nz = spec.dims[2];
  std::vector<double> drops;
  for (int j = 0; j < ny; ++j) {
    const double cy = spec.origin[1] + spec.spacing * (j + 0.5);
    for (int i = 0; i < nx; ++i) {
      const double cx = spec.origin[0] + spec.spacing * (i + 0.5);

      // Column prefilter: mirror the z-independent part of point_in_lobe.
      const Point2 local = lobe.params().placement.local_from_world({cx, cy});
      const double w = lobe.w_of_x(local.x);
      if (w <= 0.0 || std::abs(local.y) > w) continue;

      double zt = 0.0;
      drops.clear();
      if (!bands.empty()) {
        zt = top_surface(lobe, local.x, local.y);
        for (const EdgeBand& b : bands) {
          if (cx < b.x0 || cx > b.x1 || cy < b.y0 || cy > b.y1) continue;
          const double t = point_segment_distance({cx, cy}, b.a, b.b);
          if (t > b.w || b.w <= 0.0) continue;
          const double r = t / b.w;
          drops.push_back(b.d * std::sqrt(std::max(0.0, 1.0 - r * r)));
        }
      }

      for (int k = 0; k < nz; ++k) {
        const double cz = spec.origin[2] + spec.spacing * (k + 0.5);
        if (!point_in_lobe(lobe, cx, cy, cz)) continue;
        std::uint8_t label = 1;
        const double zq = cz - zt;
        if (zq <= 0.0) {
          for (double drop : drops) {
            if (zq >= -drop) {
              label = 2;
              break;
            }
          }
        }
        grid.set(i, j, k, label);
      }
    }
  }
  return grid;
}

void write_grid(const LabeledGrid3& g, const std::string& prefix) {
  nlohmann::json j;
  j["dims"] = {g.nx(), g.ny(), g.nz()};
  j["origin"] = {g.spec().origin[0], g.spec().origin[1], g.spec().origin[2]};
  j["spacing"] = g.spec().spacing;
  j["labels"] = "uint8";
  j["order"] = "x-fastest";

  std::ofstream hdr(prefix + ".json");
  if (!hdr) throw IoError("cannot write " + prefix + ".json");
  hdr << j.dump(2) << "\n";
  hdr.close();
  if (!hdr) throw IoError("failed writing " + prefix + ".json");

  std::ofstream raw(prefix + ".raw", std::ios::binary);
  if (!raw) throw IoError("cannot write " + prefix + ".raw");
  raw.write(reinterpret_cast<const char*>(g.labels().data()),
            static_cast<std::streamsize>(g.labels().size()));
  raw.close();
  if (!raw) throw IoError("failed writing " + prefix + ".raw");
}

LabeledGrid3 read_grid(const std::string& prefix) {
  std::ifstream hdr(prefix + ".json");
  if (!hdr) throw IoError("cannot open " + prefix + ".json");
  GridSpec spec;
  try {
    nlohmann::json j = nlohmann::json::parse(hdr);
    const auto dims = j.at("dims");
    const auto origin = j.at("origin");
    if (!dims.is_array() || dims.size() != 3 || !origin.is_array() ||
        origin.size() != 3) {
      throw ValidationError("grid header dims and origin must be 3-vectors");
    }
    for (int c = 0; c < 3; ++c) {
      spec.dims[static_cast<std::size_t>(c)] = dims.at(static_cast<std::size_t>(c)).get<int>();
      spec.origin[static_cast<std::size_t>(c)] = origin.at(static_cast<std::size_t>(c)).get<double>();
    }
    spec.spacing = j.at("spacing").get<double>();
    if (j.at("labels").get<std::string>() != "uint8" ||
        j.at("order").get<std::string>() != "x-fastest") {
      throw ValidationError("unsupported grid encoding in " + prefix + ".json");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("malformed grid header " + prefix + ".json: " +
                          e.what());
  }

  LabeledGrid3 g(spec);
  std::ifstream raw(prefix + ".raw", std::ios::binary);
  if (!raw) throw IoError("cannot open " + prefix + ".raw");
  raw.read(reinterpret_cast<char*>(g.labels().data()),
           static_cast<std::streamsize>(g.labels().size()));
  if (static_cast<std::size_t>(raw.gcount()) != g.labels().size() ||
      raw.peek() != std::char_traits<char>::eof()) {
    throw ValidationError(prefix + ".raw does not hold exactly " +
                          std::to_string(g.labels().size()) + " bytes");
  }
  for (std::uint8_t v : g.labels()) {
    if (v > 2) throw ValidationError(prefix + ".raw holds label values above 2");
  }
  return g;
}

void write_slice_ppm(const LabeledGrid3& g, SliceAxis axis, int index,
                     const std::string& path) {
  static constexpr std::uint8_t kColors[3][3] = {
      {245, 245, 245}, {222, 196, 132}, {36, 78, 166}};

  int w = 0, h = 0;
  switch (axis) {
    case SliceAxis::kX: w = g.ny(); h = g.nz(); break;
    case SliceAxis::kY: w = g.nx(); h = g.nz(); break;
    case SliceAxis::kZ: w = g.nx(); h = g.ny(); break;
  }
  const int extent = axis == SliceAxis::kX   ? g.nx()
                     : axis == SliceAxis::kY ? g.ny()
                                             : g.nz();
  if (index < 0 || index >= extent) {
    throw ValidationError("slice index " + std::to_string(index) +
                          " outside [0, " + std::to_string(extent) + ")");
  }

  std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h * 3);
  for (int row = 0; row < h; ++row) {
    for (int col = 0; col < w; ++col) {
      const int up = h - 1 - row;  // vertical world axis points up
      std::uint8_t v = 0;
      switch (axis) {
        case SliceAxis::kX: v = g.at(index, col, up); break;
        case SliceAxis::kY: v = g.at(col, index, up); break;
        case SliceAxis::kZ: v = g.at(col, up, index); break;
      }
      std::uint8_t* out = &px[(static_cast<std::size_t>(row) * w + col) * 3];
      out[0] = kColors[v][0];
      out[1] = kColors[v][1];
      out[2] = kColors[v][2];
    }
  }

  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  f << "P6\n" << w << " " << h << "\n255\n";
  f.write(reinterpret_cast<const char*>(px.data()),
          static_cast<std::streamsize>(px.size()));
  f.close();
  if (!f) throw IoError("failed writing " + path);
}

}  // namespace skesim
