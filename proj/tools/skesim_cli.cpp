// skesim command line: skeletonize a training image, fit its statistics,
// synthesize constrained skeletons, run the full lobe pipeline, and render
// grid slices. Data goes to files, diagnostics to stderr; exit code 1 means
// an I/O failure, 2 a validation failure.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "skesim/errors.hpp"
#include "skesim/extract.hpp"
#include "skesim/image.hpp"
#include "skesim/pipeline.hpp"
#include "skesim/render.hpp"
#include "skesim/stats.hpp"
#include "skesim/synthesis.hpp"
#include "skesim/thinning.hpp"
#include "skesim/voxel.hpp"

namespace {

using namespace skesim;

Point2 parse_xy(const std::string& text, const char* what) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw ValidationError(std::string(what) + " must be x,y");
  }
  try {
    std::size_t ax = 0, ay = 0;
    const std::string xs = text.substr(0, comma);
    const std::string ys = text.substr(comma + 1);
    const double x = std::stod(xs, &ax);
    const double y = std::stod(ys, &ay);
    if (ax != xs.size() || ay != ys.size()) {
      throw ValidationError(std::string(what) + " must be x,y");
    }
    return {x, y};
  } catch (const std::exception&) {
    throw ValidationError(std::string(what) + " must be x,y");
  }
}

void emit_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

struct SkeletonizeOpts {
  std::string in, out, thinned, root_hint;
  bool invert = false;
  int prune = 0;
};

void cmd_skeletonize(const SkeletonizeOpts& o) {
  const Point2 hint = parse_xy(o.root_hint, "--root-hint");
  BinaryImage img = read_pgm(o.in, o.invert);
  PixelSkeleton ps = thin(img);
  if (o.prune > 0) ps = prune_spurs(ps, o.prune);
  if (!o.thinned.empty()) write_pbm(ps.mask, o.thinned);
  ExtractResult ex = extract_graph(ps, hint);
  emit_warnings(ex.warnings);
  write_skeleton_csv_file(ex.skeleton, o.out);
}

struct StatsOpts {
  std::string skeleton, out;
};

void cmd_stats(const StatsOpts& o) {
  const Skeleton sk = read_skeleton_csv_file(o.skeleton);
  std::vector<std::string> warnings;
  const TrainingStats stats = compute_stats_lenient(sk, &warnings);
  emit_warnings(warnings);
  write_stats_json(stats, o.out);
}

struct SynthOpts {
  std::string stats, region, out, plot, root, inflow;
  std::uint64_t seed = 0;
  int steps = 1;
  int root_mark = 2;
  double min_edge = 1.0;
  int plot_width = 640;
};

void cmd_synth(const SynthOpts& o) {
  const TrainingStats stats = read_stats_json(o.stats);
  GrowthConfig gc;
  gc.region = read_region_json(o.region);
  gc.max_bif_steps = o.steps;
  gc.root_mark = o.root_mark;
  gc.min_edge_length = o.min_edge;
  if (o.root.empty()) {
    // Default seed point: the outline centroid, a safe interior point for
    // the lobe-shaped regions this is meant to grow in.
    Point2 c{0, 0};
    const auto& poly = gc.region->polygon;
    if (poly.empty()) throw ValidationError("region polygon is empty");
    for (Point2 p : poly) {
      c.x += p.x;
      c.y += p.y;
    }
    gc.root_point = {c.x / static_cast<double>(poly.size()),
                     c.y / static_cast<double>(poly.size())};
  } else {
    gc.root_point = parse_xy(o.root, "--root");
  }
  gc.root_inflow = o.inflow.empty() ? Vec2{1, 0} : parse_xy(o.inflow, "--inflow");

  const Skeleton sk = synthesize(stats, gc, o.seed);
  write_skeleton_csv_file(sk, o.out);
  if (!o.plot.empty()) {
    write_skeleton_ppm(sk, &*gc.region, o.plot_width, o.plot);
  }
}

struct RunOpts {
  std::string config;
};

void cmd_run(const RunOpts& o) {
  const RunOutputs out = run_pipeline(o.config);
  emit_warnings(out.warnings);
  const RunConfig cfg = read_run_config(o.config);
  std::cout << cfg.output_dir << "\n";
}

struct SliceOpts {
  std::string grid, axis = "z", out;
  int index = 0;
};

void cmd_slice(const SliceOpts& o) {
  const LabeledGrid3 g = read_grid(o.grid);
  SliceAxis ax;
  if (o.axis == "x") {
    ax = SliceAxis::kX;
  } else if (o.axis == "y") {
    ax = SliceAxis::kY;
  } else if (o.axis == "z") {
    ax = SliceAxis::kZ;
  } else {
    throw ValidationError("--axis must be x, y or z");
  }
  write_slice_ppm(g, ax, o.index, o.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"turbidite channel skeleton simulation"};
  app.require_subcommand(1);

  SkeletonizeOpts sko;
  CLI::App* sk = app.add_subcommand(
      "skeletonize", "thin a PGM training image and extract its skeleton graph");
  sk->add_option("--in", sko.in, "training image (P1/P2/P5)")->required();
  sk->add_option("--root-hint", sko.root_hint, "x,y near the root end point")
      ->required();
  sk->add_option("--out", sko.out, "skeleton CSV to write")->required();
  sk->add_option("--thinned", sko.thinned, "also write the thinned mask (PBM)");
  sk->add_flag("--invert", sko.invert, "treat light pixels as foreground");
  sk->add_option("--prune", sko.prune, "remove spurs shorter than N pixels")
      ->check(CLI::NonNegativeNumber);
  sk->callback([&] { cmd_skeletonize(sko); });

  StatsOpts sto;
  CLI::App* st = app.add_subcommand(
      "stats", "fit uniform angle and length distributions to a skeleton");
  st->add_option("--skeleton", sto.skeleton, "skeleton CSV")->required();
  st->add_option("--out", sto.out, "stats JSON to write")->required();
  st->callback([&] { cmd_stats(sto); });

  SynthOpts syo;
  CLI::App* sy = app.add_subcommand(
      "synth", "grow a random skeleton inside a region polygon");
  sy->add_option("--stats", syo.stats, "stats JSON")->required();
  sy->add_option("--region", syo.region, "region polygon JSON")->required();
  sy->add_option("--seed", syo.seed, "RNG seed")->required();
  sy->add_option("--steps", syo.steps, "bifurcation steps")->required();
  sy->add_option("--out", syo.out, "skeleton CSV to write")->required();
  sy->add_option("--plot", syo.plot, "also write a PPM plot");
  sy->add_option("--root", syo.root, "seed point x,y (default: region centroid)");
  sy->add_option("--inflow", syo.inflow, "virtual inflow x,y (default: 1,0)");
  sy->add_option("--root-mark", syo.root_mark, "1 spawns two trunks, 2 one");
  sy->add_option("--min-edge", syo.min_edge, "shortest accepted edge length");
  sy->add_option("--plot-width", syo.plot_width, "plot width in pixels");
  sy->callback([&] { cmd_synth(syo); });

  RunOpts ruo;
  CLI::App* ru = app.add_subcommand(
      "run", "full pipeline: image to labeled voxel grid, per a JSON config");
  ru->add_option("--config", ruo.config, "run config JSON")->required();
  ru->callback([&] { cmd_run(ruo); });

  SliceOpts slo;
  CLI::App* sl = app.add_subcommand(
      "slice", "render one grid slice to PPM (background/lobe/channel colors)");
  sl->add_option("--grid", slo.grid, "grid prefix (reads .json and .raw)")
      ->required();
  sl->add_option("--axis", slo.axis, "slice axis: x, y or z");
  sl->add_option("--index", slo.index, "cell index along the axis")->required();
  sl->add_option("--out", slo.out, "PPM to write")->required();
  sl->callback([&] { cmd_slice(slo); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const skesim::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 1;
  } catch (const skesim::ValidationError& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
