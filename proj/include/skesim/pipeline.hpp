#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skesim/lobe.hpp"
#include "skesim/stats.hpp"
#include "skesim/synthesis.hpp"
#include "skesim/voxel.hpp"

namespace skesim {

// Grid request from the config: dims are mandatory, spacing and origin are
// fitted to the placed lobes when absent (origin alone is rejected).
struct GridConfig {
  std::array<int, 3> dims{64, 64, 32};
  std::optional<double> spacing;
  std::optional<std::array<double, 3>> origin;
};

// One end-to-end run: training image -> stats -> per-lobe syntheses -> one
// combined labeled grid. Growth root and inflow are given in the lobe's
// local frame so a single config serves every placed lobe; the defaults put
// the root on the axis near the upstream tip, flowing down the axis.
struct RunConfig {
  std::string training_image;
  Point2 root_hint;
  bool invert = false;
  int prune = 0;  // spur prune length in pixels, 0 disables

  int max_bif_steps = 6;
  int root_mark = 2;
  double min_edge_length = 1.0;
  std::optional<Point2> root_point_local;
  Vec2 root_inflow_local{1, 0};

  std::vector<LobeParams> lobes;
  int systems_per_lobe = 1;
  ChannelParams channel;
  GridConfig grid;
  std::uint64_t seed = 0;
  std::string output_dir;
};

// A relative training_image resolves against the config file's directory so
// configs can sit next to their inputs; a relative output_dir resolves
// against the working directory as usual.
RunConfig read_run_config(const std::string& path);
RunConfig run_config_from_json_text(const std::string& text);

// Covering grid: exact when spacing and origin are given, otherwise fitted to
// the bounding box of the placed outlines (2% pad) with the top cell face on
// z = 0 and the x/y extents centered.
GridSpec fit_grid(const std::vector<Lobe>& lobes, const GridConfig& gc);

// compute_stats that tolerates a skeleton without bifurcations: the angle
// distribution degenerates to U[0, 0] and a warning is appended instead of
// failing. Single-sample lists fit U[a, a] with a warning as well.
TrainingStats compute_stats_lenient(const Skeleton& sk,
                                    std::vector<std::string>* warnings);

struct RunOutputs {
  std::vector<std::string> files;  // relative to output_dir, manifest last
  GridSpec grid;
  std::vector<std::string> warnings;
};

// Executes the whole pipeline for a config file. Every error is rethrown
// with the failing stage name prefixed, preserving its type (and therefore
// the CLI exit code). Outputs: training_skeleton.csv, one skel_l<i>_s<j>.csv
// per synthesis, the model.json/model.raw grid pair and a manifest.json
// listing every file with its FNV-1a 64 content hash and every derived seed.
RunOutputs run_pipeline(const std::string& config_path);

std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t fnv1a64_file(const std::string& path);
std::string fnv1a64_hex(std::uint64_t h);

// Recomputes the hash of every file listed in <dir>/manifest.json; returns
// one message per missing or mismatching file, empty when all verify.
std::vector<std::string> verify_manifest(const std::string& dir);

}  // namespace skesim
