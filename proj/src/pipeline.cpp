#include "skesim/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "skesim/errors.hpp"
#include "skesim/extract.hpp"
#include "skesim/image.hpp"
#include "skesim/thinning.hpp"

namespace fs = std::filesystem;

namespace skesim {

namespace {

using nlohmann::json;

Point2 parse_point(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ValidationError(std::string(what) + " must be a [x, y] number pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

RunConfig parse_run_config(const json& j) {
  RunConfig cfg;
  try {
    cfg.training_image = j.at("training_image").get<std::string>();
    cfg.root_hint = parse_point(j.at("root_hint"), "root_hint");
    cfg.invert = j.value("invert", false);
    cfg.prune = j.value("prune", 0);

    if (j.contains("growth")) {
      const json& g = j.at("growth");
      cfg.max_bif_steps = g.value("max_bif_steps", cfg.max_bif_steps);
      cfg.root_mark = g.value("root_mark", cfg.root_mark);
      cfg.min_edge_length = g.value("min_edge_length", cfg.min_edge_length);
      if (g.contains("root_point")) {
        cfg.root_point_local = parse_point(g.at("root_point"), "growth.root_point");
      }
      if (g.contains("root_inflow")) {
        cfg.root_inflow_local = parse_point(g.at("root_inflow"), "growth.root_inflow");
      }
    }

    const json& lobes = j.at("lobes");
    if (!lobes.is_array() || lobes.empty()) {
      throw ValidationError("lobes must be a non-empty array");
    }
    for (const json& lj : lobes) {
      cfg.lobes.push_back(lobe_params_from_json_text(lj.dump()));
    }

    cfg.systems_per_lobe = j.value("systems_per_lobe", 1);
    if (cfg.systems_per_lobe < 1) {
      throw ValidationError("systems_per_lobe must be at least 1");
    }

    if (j.contains("channel")) {
      const json& c = j.at("channel");
      cfg.channel.half_width = c.value("half_width", cfg.channel.half_width);
      cfg.channel.depth = c.value("depth", cfg.channel.depth);
      cfg.channel.taper = c.value("taper", cfg.channel.taper);
    }

    const json& g = j.at("grid");
    const json& dims = g.at("dims");
    if (!dims.is_array() || dims.size() != 3) {
      throw ValidationError("grid.dims must be a 3-element array");
    }
    for (std::size_t c = 0; c < 3; ++c) cfg.grid.dims[c] = dims.at(c).get<int>();
    if (g.contains("spacing")) cfg.grid.spacing = g.at("spacing").get<double>();
    if (g.contains("origin")) {
      const json& o = g.at("origin");
      if (!o.is_array() || o.size() != 3) {
        throw ValidationError("grid.origin must be a 3-element array");
      }
      cfg.grid.origin = {{o.at(0).get<double>(), o.at(1).get<double>(),
                          o.at(2).get<double>()}};
    }

    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.output_dir = j.at("output_dir").get<std::string>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad run config: ") + e.what());
  }
  return cfg;
}

// Root default: on the lobe axis, 5% of the length downstream of the tip.
Point2 default_local_root(const LobeParams& p) { return {0.05 * p.length, 0}; }

struct HashedFile {
  std::string name;  // relative to the output directory
  std::uint64_t hash = 0;
};

}  // namespace

RunConfig run_config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("run config is not valid JSON: ") + e.what());
  }
  return parse_run_config(j);
}

RunConfig read_run_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open run config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  RunConfig cfg = run_config_from_json_text(ss.str());
  // Inputs travel with the config; outputs land under the working directory.
  const fs::path ti(cfg.training_image);
  if (ti.is_relative()) {
    cfg.training_image = (fs::path(path).parent_path() / ti).string();
  }
  return cfg;
}

GridSpec fit_grid(const std::vector<Lobe>& lobes, const GridConfig& gc) {
  GridSpec spec;
  spec.dims = gc.dims;
  if (gc.origin.has_value() && gc.spacing.has_value()) {
    spec.origin = *gc.origin;
    spec.spacing = *gc.spacing;
    return spec;
  }
  if (gc.origin.has_value()) {
    throw ValidationError("grid.origin without grid.spacing is ambiguous");
  }
  if (lobes.empty()) throw ValidationError("cannot fit a grid to zero lobes");

  double minx = std::numeric_limits<double>::infinity(), maxx = -minx;
  double miny = minx, maxy = -minx;
  double maxd = 0;
  for (const Lobe& l : lobes) {
    RegionBoundary rb = region_polygon(l, 128);
    for (Point2 p : rb.polygon) {
      minx = std::min(minx, p.x);
      maxx = std::max(maxx, p.x);
      miny = std::min(miny, p.y);
      maxy = std::max(maxy, p.y);
    }
    maxd = std::max(maxd, l.params().depth);
  }
  const double pad = 0.02 * std::max(maxx - minx, maxy - miny);
  minx -= pad;
  maxx += pad;
  miny -= pad;
  maxy += pad;

  double spacing = std::max({(maxx - minx) / gc.dims[0],
                             (maxy - miny) / gc.dims[1], maxd / gc.dims[2]});
  if (gc.spacing.has_value()) spacing = *gc.spacing;
  if (!(spacing > 0)) throw ValidationError("fitted grid spacing is not positive");

  // Center x/y, hang the full z extent below the z = 0 deposit top so cell
  // centers straddle the flat face instead of sitting on it.
  spec.spacing = spacing;
  spec.origin = {0.5 * (minx + maxx) - 0.5 * spacing * gc.dims[0],
                 0.5 * (miny + maxy) - 0.5 * spacing * gc.dims[1],
                 -spacing * gc.dims[2]};
  return spec;
}

TrainingStats compute_stats_lenient(const Skeleton& sk,
                                    std::vector<std::string>* warnings) {
  TrainingStats stats = extract_samples(sk);
  auto warn = [&](const std::string& msg) {
    if (warnings != nullptr) warnings->push_back(msg);
  };
  if (stats.signed_angles.empty()) {
    stats.angle_dist = {0, 0};
    warn("training skeleton has no bifurcations; angle distribution "
         "degenerates to U[0, 0]");
  } else {
    stats.angle_dist = fit_uniform(stats.signed_angles);
    if (stats.signed_angles.size() == 1) {
      warn("single bifurcation angle in training data; U[a, a] is degenerate");
    }
  }
  stats.length_dist = fit_uniform(stats.lengths);
  if (stats.lengths.size() == 1) {
    warn("single edge length in training data; U[l, l] is degenerate");
  }
  return stats;
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 14695981039346656037ull;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for hashing");
  std::vector<char> buf(1 << 16);
  std::uint64_t h = 14695981039346656037ull;
  while (f) {
    f.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    const std::streamsize got = f.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[static_cast<std::size_t>(i)]);
      h *= 1099511628211ull;
    }
  }
  return h;
}

std::string fnv1a64_hex(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

RunOutputs run_pipeline(const std::string& config_path) {
  std::string stage = "config";
  try {
    const RunConfig cfg = read_run_config(config_path);
    fs::create_directories(cfg.output_dir);
    const auto out_path = [&](const std::string& name) {
      return (fs::path(cfg.output_dir) / name).string();
    };

    RunOutputs out;

    stage = "skeletonize";
    BinaryImage img = read_pgm(cfg.training_image, cfg.invert);
    PixelSkeleton ps = thin(img);
    if (cfg.prune > 0) ps = prune_spurs(ps, cfg.prune);
    ExtractResult ex = extract_graph(ps, cfg.root_hint);
    for (const std::string& w : ex.warnings) out.warnings.push_back("skeletonize: " + w);
    write_skeleton_csv_file(ex.skeleton, out_path("training_skeleton.csv"));
    out.files.push_back("training_skeleton.csv");

    stage = "stats";
    std::vector<std::string> stat_warnings;
    TrainingStats stats = compute_stats_lenient(ex.skeleton, &stat_warnings);
    for (const std::string& w : stat_warnings) out.warnings.push_back("stats: " + w);

    stage = "lobes";
    std::vector<Lobe> lobes;
    for (const LobeParams& lp : cfg.lobes) lobes.push_back(build_lobe(lp));
    const GridSpec grid_spec = fit_grid(lobes, cfg.grid);
    out.grid = grid_spec;

    stage = "synthesis";
    std::vector<std::vector<ChannelSystem>> per_lobe(lobes.size());
    std::vector<std::pair<std::string, std::uint64_t>> derived_seeds;
    for (std::size_t li = 0; li < lobes.size(); ++li) {
      GrowthConfig gc;
      gc.max_bif_steps = cfg.max_bif_steps;
      gc.root_mark = cfg.root_mark;
      gc.min_edge_length = cfg.min_edge_length;
      gc.region = region_polygon(lobes[li], 128);
      const Placement& pl = cfg.lobes[li].placement;
      const Point2 local_root = cfg.root_point_local.has_value()
                                    ? *cfg.root_point_local
                                    : default_local_root(cfg.lobes[li]);
      gc.root_point = pl.world_from_local(local_root);
      gc.root_inflow = rotated(cfg.root_inflow_local, pl.rot);

      for (int sj = 0; sj < cfg.systems_per_lobe; ++sj) {
        const std::uint64_t s = cfg.seed +
                                static_cast<std::uint64_t>(li) * 10007ull +
                                static_cast<std::uint64_t>(sj);
        Skeleton sk = synthesize(stats, gc, s);
        const std::string name = "skel_l" + std::to_string(li) + "_s" +
                                 std::to_string(sj) + ".csv";
        write_skeleton_csv_file(sk, out_path(name));
        out.files.push_back(name);
        derived_seeds.emplace_back(name, s);
        per_lobe[li].push_back({std::move(sk), cfg.channel});
      }
    }

    stage = "rasterize";
    LabeledGrid3 model(grid_spec);
    for (std::size_t li = 0; li < lobes.size(); ++li) {
      std::vector<std::string> rw;
      LabeledGrid3 part = rasterize(lobes[li], per_lobe[li], grid_spec, &rw);
      for (const std::string& w : rw) {
        out.warnings.push_back("rasterize lobe " + std::to_string(li) + ": " + w);
      }
      for (std::size_t n = 0; n < model.labels().size(); ++n) {
        model.labels()[n] = std::max(model.labels()[n], part.labels()[n]);
      }
    }
    write_grid(model, out_path("model"));
    out.files.push_back("model.json");
    out.files.push_back("model.raw");

    stage = "manifest";
    nlohmann::json m;
    m["config"] = {{"file", config_path},
                   {"fnv1a64", fnv1a64_hex(fnv1a64_file(config_path))}};
    m["inputs"] = nlohmann::json::array();
    m["inputs"].push_back(
        {{"file", cfg.training_image},
         {"fnv1a64", fnv1a64_hex(fnv1a64_file(cfg.training_image))}});
    m["seed"] = cfg.seed;
    m["seed_rule"] = "seed + lobe_index * 10007 + system_index";
    m["derived_seeds"] = nlohmann::json::array();
    for (const auto& [name, s] : derived_seeds) {
      m["derived_seeds"].push_back({{"file", name}, {"seed", s}});
    }
    m["outputs"] = nlohmann::json::array();
    for (const std::string& name : out.files) {
      m["outputs"].push_back(
          {{"file", name}, {"fnv1a64", fnv1a64_hex(fnv1a64_file(out_path(name)))}});
    }
    std::ofstream mf(out_path("manifest.json"));
    if (!mf) throw IoError("cannot write " + out_path("manifest.json"));
    mf << m.dump(2) << "\n";
    mf.close();
    if (!mf) throw IoError("failed writing " + out_path("manifest.json"));
    out.files.push_back("manifest.json");

    return out;
  } catch (const IoError& e) {
    throw IoError("stage " + stage + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError("stage " + stage + ": " + e.what());
  }
}

std::vector<std::string> verify_manifest(const std::string& dir) {
  std::vector<std::string> problems;
  const fs::path root(dir);
  std::ifstream f(root / "manifest.json");
  if (!f) throw IoError("cannot open " + (root / "manifest.json").string());
  nlohmann::json m;
  try {
    m = nlohmann::json::parse(f);
    for (const auto& entry : m.at("outputs")) {
      const std::string name = entry.at("file").get<std::string>();
      const std::string want = entry.at("fnv1a64").get<std::string>();
      const fs::path p = root / name;
      if (!fs::exists(p)) {
        problems.push_back(name + ": missing");
        continue;
      }
      const std::string got = fnv1a64_hex(fnv1a64_file(p.string()));
      if (got != want) {
        problems.push_back(name + ": hash " + got + " != manifest " + want);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed manifest: ") + e.what());
  }
  return problems;
}

}  // namespace skesim
