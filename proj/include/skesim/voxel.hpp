#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "skesim/lobe.hpp"
#include "skesim/skeleton.hpp"

namespace skesim {

// Swept channel cross-section: a half-ellipse of the given half-width and
// depth hanging below z = 0, optionally shrinking per tree generation.
struct ChannelParams {
  double half_width = 4.0;
  double depth = 2.0;
  double taper = 1.0;  // size multiplier per generation, in (0, 1]
};

struct GridSpec {
  std::array<double, 3> origin{0.0, 0.0, 0.0};  // minimum corner, world units
  double spacing = 1.0;                         // uniform cell edge
  std::array<int, 3> dims{1, 1, 1};             // nx, ny, nz
};

// Dense labeled voxel grid. Labels: 0 background, 1 lobe, 2 channel.
// Storage is x-fastest: index = i + nx * (j + ny * k).
class LabeledGrid3 {
 public:
  LabeledGrid3() = default;
  // Throws ValidationError on non-positive dims or spacing, or when the cell
  // count would exceed 2^31.
  explicit LabeledGrid3(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  int nx() const { return spec_.dims[0]; }
  int ny() const { return spec_.dims[1]; }
  int nz() const { return spec_.dims[2]; }

  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(nx()) *
               (static_cast<std::size_t>(j) +
                static_cast<std::size_t>(ny()) * static_cast<std::size_t>(k));
  }
  std::uint8_t at(int i, int j, int k) const { return labels_[index(i, j, k)]; }
  void set(int i, int j, int k, std::uint8_t v) { labels_[index(i, j, k)] = v; }

  std::array<double, 3> cell_center(int i, int j, int k) const {
    return {spec_.origin[0] + spec_.spacing * (i + 0.5),
            spec_.origin[1] + spec_.spacing * (j + 0.5),
            spec_.origin[2] + spec_.spacing * (k + 0.5)};
  }

  const std::vector<std::uint8_t>& labels() const { return labels_; }
  std::vector<std::uint8_t>& labels() { return labels_; }
  std::size_t count(std::uint8_t label) const;

 private:
  GridSpec spec_;
  std::vector<std::uint8_t> labels_;
};

// Directed depth of each edge's father node below the root; channel sizes
// scale by taper^generation so trunks stay wide and twigs narrow. Nodes with
// no inflow seed the walk at depth zero when no root is set.
std::vector<int> edge_generations(const Skeleton& sk);

// Union over edges of half-elliptic sweeps: with t the 2D distance from
// (x, y) to the edge segment and (w_e, d_e) the tapered sizes, the point is
// inside iff t <= w_e, z <= 0 and z >= -d_e * sqrt(1 - (t / w_e)^2). The
// distance-to-segment metric rounds the caps at the nodes.
bool point_in_channel(const Skeleton& sk, const ChannelParams& cp, double x,
                      double y, double z);

// Channel membership translated down onto the lobe top: equals
// point_in_channel at (x, y, z - top_surface(x, y)). Columns outside the
// lobe outline hold nothing.
bool point_in_projected_channel(const Skeleton& sk, const ChannelParams& cp,
                                const Lobe& lobe, double x, double y, double z);

struct ChannelSystem {
  Skeleton skeleton;
  ChannelParams channel;
};

// Labels every cell center: 2 when the lobe and a projected channel both
// contain it, 1 for the lobe alone, 0 otherwise. The conjunction clips
// channel width overhang to the lobe body. A spacing coarser than a system's
// cross-section appends a warning line instead of failing.
LabeledGrid3 rasterize(const Lobe& lobe, std::span<const ChannelSystem> systems,
                       const GridSpec& spec,
                       std::vector<std::string>* warnings = nullptr);

// Grid pair on disk: <prefix>.json header {dims, origin, spacing,
// labels: "uint8", order: "x-fastest"} plus <prefix>.raw label bytes.
void write_grid(const LabeledGrid3& g, const std::string& prefix);
LabeledGrid3 read_grid(const std::string& prefix);

enum class SliceAxis { kX, kY, kZ };

// P6 render of one axis-aligned slice: background near-white, lobe sand,
// channel blue. The vertical image axis points up (z in x/y slices, y in z
// slices). Throws ValidationError when the index is out of range.
void write_slice_ppm(const LabeledGrid3& g, SliceAxis axis, int index,
                     const std::string& path);

}  // namespace skesim
