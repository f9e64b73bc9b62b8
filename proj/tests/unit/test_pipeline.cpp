#include "skesim/pipeline.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "skesim/errors.hpp"
#include "skesim/image.hpp"

using namespace skesim;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "skesim_pipeline_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  REQUIRE(f.good());
  f << text;
}

// Dark-on-white Y-shaped strokes, the smallest image that trains both
// distributions with more than one sample each.
void write_training_pgm(const fs::path& path) {
  BinaryImage thin_strokes(96, 72);
  draw_line(thin_strokes, {8, 36}, {44, 36});
  draw_line(thin_strokes, {44, 36}, {76, 16});
  draw_line(thin_strokes, {44, 36}, {76, 56});
  BinaryImage fat(96, 72);
  for (int y = 0; y < 72; ++y)
    for (int x = 0; x < 96; ++x) {
      if (!thin_strokes.at(x, y)) continue;
      for (int dy = -2; dy <= 2; ++dy)
        for (int dx = -2; dx <= 2; ++dx)
          if (dx * dx + dy * dy <= 4 && fat.in_bounds(x + dx, y + dy))
            fat.set(x + dx, y + dy, true);
    }
  std::ofstream f(path);
  REQUIRE(f.good());
  f << "P2\n96 72\n255\n";
  for (int y = 0; y < 72; ++y) {
    for (int x = 0; x < 96; ++x) f << (fat.at(x, y) ? "0 " : "255 ");
    f << "\n";
  }
}

std::string run_config_text(const fs::path& image, const fs::path& out_dir,
                            int lobes, int systems, std::uint64_t seed) {
  nlohmann::json j;
  j["training_image"] = image.string();
  j["root_hint"] = {8, 36};
  j["prune"] = 3;
  j["growth"] = {{"max_bif_steps", 4}, {"min_edge_length", 0.5}};
  j["lobes"] = nlohmann::json::array();
  j["lobes"].push_back({{"length", 100}, {"width", 40}, {"depth", 10}});
  if (lobes > 1) {
    j["lobes"].push_back(
        {{"length", 100},
         {"width", 40},
         {"depth", 10},
         {"placement", {{"dx", 60}, {"dy", 30}, {"rot_deg", 25}}}});
  }
  j["systems_per_lobe"] = systems;
  j["channel"] = {{"half_width", 4.0}, {"depth", 3.0}};
  j["grid"] = {{"dims", {64, 64, 32}}};
  j["seed"] = seed;
  j["output_dir"] = out_dir.string();
  return j.dump(2);
}

}  // namespace

TEST_CASE("fnv1a64 known vectors") {
  CHECK(fnv1a64("", 0) == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a", 1) == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("hello", 5) == 0xa430d84680aabd0bull);
  CHECK(fnv1a64_hex(0xcbf29ce484222325ull) == "cbf29ce484222325");
  CHECK(fnv1a64_hex(0) == "0000000000000000");

  const fs::path dir = fresh_dir("fnv");
  spit(dir / "blob.bin", "hello");
  CHECK(fnv1a64_file((dir / "blob.bin").string()) == 0xa430d84680aabd0bull);
  CHECK_THROWS_AS(fnv1a64_file((dir / "absent.bin").string()), IoError);
}

TEST_CASE("fit_grid passthrough and fitting") {
  std::vector<Lobe> lobes;
  lobes.push_back(build_lobe(LobeParams{}));

  SUBCASE("explicit spacing and origin pass through untouched") {
    GridConfig gc;
    gc.dims = {10, 20, 30};
    gc.spacing = 0.75;
    gc.origin = {{-1, -2, -3}};
    const GridSpec s = fit_grid(lobes, gc);
    CHECK(s.dims == std::array<int, 3>{10, 20, 30});
    CHECK(s.spacing == 0.75);
    CHECK(s.origin[0] == -1);
    CHECK(s.origin[2] == -3);
  }

  SUBCASE("origin without spacing is rejected") {
    GridConfig gc;
    gc.origin = {{0, 0, 0}};
    CHECK_THROWS_AS(fit_grid(lobes, gc), ValidationError);
  }

  SUBCASE("no lobes to fit to is rejected") {
    CHECK_THROWS_AS(fit_grid({}, GridConfig{}), ValidationError);
  }

  SUBCASE("auto fit covers the outline and top-aligns z") {
    GridConfig gc;
    gc.dims = {64, 64, 32};
    const GridSpec s = fit_grid(lobes, gc);
    // Top cell face on the deposit surface: centers straddle z = 0.
    CHECK(s.origin[2] + s.spacing * 32 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s.spacing * 32 >= lobes[0].params().depth);
    const RegionBoundary rb = region_polygon(lobes[0], 128);
    for (Point2 p : rb.polygon) {
      CHECK(p.x >= s.origin[0]);
      CHECK(p.x <= s.origin[0] + s.spacing * 64);
      CHECK(p.y >= s.origin[1]);
      CHECK(p.y <= s.origin[1] + s.spacing * 64);
    }
  }

  SUBCASE("user spacing overrides the fitted one, origin still derived") {
    GridConfig gc;
    gc.dims = {64, 64, 32};
    gc.spacing = 2.5;
    const GridSpec s = fit_grid(lobes, gc);
    CHECK(s.spacing == 2.5);
    CHECK(s.origin[2] == doctest::Approx(-2.5 * 32).epsilon(1e-12));
  }
}

TEST_CASE("lenient stats degrade with warnings instead of failing") {
  SUBCASE("single edge, no bifurcations") {
    Skeleton sk;
    NodeId a = sk.add_node({0, 0}, 1);
    NodeId b = sk.add_node({10, 0}, 1);
    sk.set_root(a);
    sk.add_edge(a, b);
    std::vector<std::string> warnings;
    const TrainingStats st = compute_stats_lenient(sk, &warnings);
    CHECK(st.angle_dist.lo == 0.0);
    CHECK(st.angle_dist.hi == 0.0);
    CHECK(st.length_dist.lo == doctest::Approx(10.0));
    CHECK(st.length_dist.hi == doctest::Approx(10.0));
    REQUIRE(warnings.size() == 2);
    CHECK(warnings[0].find("no bifurcations") != std::string::npos);
    CHECK(warnings[1].find("single edge length") != std::string::npos);
    // A null sink must be tolerated.
    compute_stats_lenient(sk, nullptr);
  }

  SUBCASE("proper bifurcation produces no warnings") {
    Skeleton sk;
    NodeId r = sk.add_node({0, 0}, 2);
    NodeId j = sk.add_node({10, 0}, 3);
    NodeId u = sk.add_node({20, 6}, 1);
    NodeId d = sk.add_node({20, -6}, 1);
    sk.set_root(r);
    sk.add_edge(r, j);
    sk.add_edge(j, u);
    sk.add_edge(j, d);
    std::vector<std::string> warnings;
    const TrainingStats st = compute_stats_lenient(sk, &warnings);
    CHECK(warnings.empty());
    CHECK(st.signed_angles.size() == 2);
    CHECK(st.lengths.size() == 3);
    CHECK(st.angle_dist.lo == doctest::Approx(-st.angle_dist.hi));
  }
}

TEST_CASE("run config parsing") {
  const fs::path dir = fresh_dir("config");
  const std::string text =
      run_config_text(dir / "train.pgm", dir / "out", 2, 2, 99);

  SUBCASE("fields land where they should") {
    const RunConfig cfg = run_config_from_json_text(text);
    CHECK(cfg.training_image == (dir / "train.pgm").string());
    CHECK(cfg.root_hint.x == 8);
    CHECK(cfg.root_hint.y == 36);
    CHECK(cfg.prune == 3);
    CHECK(cfg.invert == false);
    CHECK(cfg.max_bif_steps == 4);
    CHECK(cfg.min_edge_length == 0.5);
    CHECK(cfg.root_mark == 2);                      // untouched default
    CHECK_FALSE(cfg.root_point_local.has_value());  // untouched default
    REQUIRE(cfg.lobes.size() == 2);
    CHECK(cfg.lobes[1].placement.dx == 60);
    CHECK(cfg.systems_per_lobe == 2);
    CHECK(cfg.channel.half_width == 4.0);
    CHECK(cfg.channel.depth == 3.0);
    CHECK(cfg.channel.taper == 1.0);  // untouched default
    CHECK(cfg.grid.dims == std::array<int, 3>{64, 64, 32});
    CHECK_FALSE(cfg.grid.spacing.has_value());
    CHECK_FALSE(cfg.grid.origin.has_value());
    CHECK(cfg.seed == 99);
  }

  SUBCASE("relative training image resolves against the config directory") {
    nlohmann::json j = nlohmann::json::parse(text);
    j["training_image"] = "train.pgm";
    spit(dir / "cfg.json", j.dump());
    const RunConfig cfg = read_run_config((dir / "cfg.json").string());
    CHECK(cfg.training_image == (dir / "train.pgm").string());
    // Text-parsed configs have no anchor directory and keep the path as-is.
    CHECK(run_config_from_json_text(j.dump()).training_image == "train.pgm");
  }

  SUBCASE("growth root point and inflow parse as local-frame pairs") {
    nlohmann::json j = nlohmann::json::parse(text);
    j["growth"]["root_point"] = {5.0, 1.0};
    j["growth"]["root_inflow"] = {0.0, -1.0};
    const RunConfig cfg = run_config_from_json_text(j.dump());
    REQUIRE(cfg.root_point_local.has_value());
    CHECK(cfg.root_point_local->x == 5.0);
    CHECK(cfg.root_inflow_local.y == -1.0);
  }

  SUBCASE("malformed configs are rejected with the validation type") {
    nlohmann::json j = nlohmann::json::parse(text);
    j.erase("training_image");
    CHECK_THROWS_AS(run_config_from_json_text(j.dump()), ValidationError);

    j = nlohmann::json::parse(text);
    j["lobes"] = nlohmann::json::array();
    CHECK_THROWS_AS(run_config_from_json_text(j.dump()), ValidationError);

    j = nlohmann::json::parse(text);
    j["systems_per_lobe"] = 0;
    CHECK_THROWS_AS(run_config_from_json_text(j.dump()), ValidationError);

    j = nlohmann::json::parse(text);
    j["grid"]["dims"] = {64, 64};
    CHECK_THROWS_AS(run_config_from_json_text(j.dump()), ValidationError);

    j = nlohmann::json::parse(text);
    j["root_hint"] = "upper left";
    CHECK_THROWS_AS(run_config_from_json_text(j.dump()), ValidationError);

    CHECK_THROWS_AS(run_config_from_json_text("{nope"), ValidationError);
    CHECK_THROWS_AS(read_run_config((dir / "absent.json").string()), IoError);
  }
}

TEST_CASE("pipeline runs end to end and is reproducible") {
  const fs::path dir = fresh_dir("run");
  write_training_pgm(dir / "train.pgm");
  spit(dir / "run_a.json",
       run_config_text(dir / "train.pgm", dir / "out_a", 1, 1, 11));
  spit(dir / "run_b.json",
       run_config_text(dir / "train.pgm", dir / "out_b", 1, 1, 11));

  const RunOutputs out = run_pipeline((dir / "run_a.json").string());
  CHECK(out.warnings.empty());
  REQUIRE(out.files.size() == 5);
  CHECK(out.files.front() == "training_skeleton.csv");
  CHECK(out.files[1] == "skel_l0_s0.csv");
  CHECK(out.files.back() == "manifest.json");
  for (const std::string& name : out.files) {
    CHECK(fs::exists(dir / "out_a" / name));
  }
  CHECK(out.grid.origin[2] + out.grid.spacing * 32 ==
        doctest::Approx(0.0).epsilon(1e-12));

  // The training graph is the drawn Y: one junction, three tips, three edges.
  const Skeleton tr =
      read_skeleton_csv_file((dir / "out_a" / "training_skeleton.csv").string());
  CHECK(tr.nodes().size() == 4);
  CHECK(tr.edges().size() == 3);

  const LabeledGrid3 model = read_grid((dir / "out_a" / "model").string());
  CHECK(model.count(1) > 0);
  CHECK(model.count(2) > 0);
  CHECK(model.count(1) + model.count(2) < model.labels().size());

  CHECK(verify_manifest((dir / "out_a").string()).empty());

  // Same config apart from the output directory: every artifact byte-equal.
  run_pipeline((dir / "run_b.json").string());
  for (const char* name :
       {"training_skeleton.csv", "skel_l0_s0.csv", "model.json", "model.raw"}) {
    INFO(name);
    CHECK(slurp(dir / "out_a" / name) == slurp(dir / "out_b" / name));
  }

  // Rerunning the identical config rewrites an identical manifest.
  const std::string manifest_before = slurp(dir / "out_a" / "manifest.json");
  run_pipeline((dir / "run_a.json").string());
  CHECK(slurp(dir / "out_a" / "manifest.json") == manifest_before);
}

TEST_CASE("pipeline derives one seed per lobe and system") {
  const fs::path dir = fresh_dir("seeds");
  write_training_pgm(dir / "train.pgm");
  spit(dir / "run.json",
       run_config_text(dir / "train.pgm", dir / "out", 2, 2, 3));

  const RunOutputs out = run_pipeline((dir / "run.json").string());
  REQUIRE(out.files.size() == 8);  // training + 4 skeletons + grid pair + manifest

  const nlohmann::json m =
      nlohmann::json::parse(slurp(dir / "out" / "manifest.json"));
  CHECK(m.at("seed") == 3);
  CHECK(m.at("seed_rule") == "seed + lobe_index * 10007 + system_index");
  const auto& ds = m.at("derived_seeds");
  REQUIRE(ds.size() == 4);
  CHECK(ds[0].at("file") == "skel_l0_s0.csv");
  CHECK(ds[0].at("seed") == 3);
  CHECK(ds[1].at("seed") == 4);
  CHECK(ds[2].at("file") == "skel_l1_s0.csv");
  CHECK(ds[2].at("seed") == 10010);
  CHECK(ds[3].at("seed") == 10011);
  CHECK(m.at("outputs").size() == out.files.size() - 1);  // manifest not listed

  // Distinct seeds actually produce distinct realizations.
  CHECK(slurp(dir / "out" / "skel_l0_s0.csv") !=
        slurp(dir / "out" / "skel_l0_s1.csv"));
}

TEST_CASE("manifest verification notices tampering") {
  const fs::path dir = fresh_dir("tamper");
  write_training_pgm(dir / "train.pgm");
  spit(dir / "run.json",
       run_config_text(dir / "train.pgm", dir / "out", 1, 1, 5));
  run_pipeline((dir / "run.json").string());
  REQUIRE(verify_manifest((dir / "out").string()).empty());

  SUBCASE("a modified file is reported by name") {
    std::string raw = slurp(dir / "out" / "model.raw");
    raw[0] = static_cast<char>(raw[0] ^ 1);
    spit(dir / "out" / "model.raw", raw);
    const auto problems = verify_manifest((dir / "out").string());
    REQUIRE(problems.size() == 1);
    CHECK(problems[0].find("model.raw") != std::string::npos);
    CHECK(problems[0].find("hash") != std::string::npos);
  }

  SUBCASE("a deleted file is reported missing") {
    fs::remove(dir / "out" / "skel_l0_s0.csv");
    const auto problems = verify_manifest((dir / "out").string());
    REQUIRE(problems.size() == 1);
    CHECK(problems[0].find("missing") != std::string::npos);
  }

  SUBCASE("absent or mangled manifests raise typed errors") {
    CHECK_THROWS_AS(verify_manifest((dir / "nowhere").string()), IoError);
    spit(dir / "out" / "manifest.json", "{\"outputs\": 7}");
    CHECK_THROWS_AS(verify_manifest((dir / "out").string()), ValidationError);
  }
}

TEST_CASE("pipeline errors carry the failing stage") {
  const fs::path dir = fresh_dir("stages");

  try {
    run_pipeline((dir / "absent.json").string());
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("stage config") != std::string::npos);
  }

  spit(dir / "bad.json", "{]");
  try {
    run_pipeline((dir / "bad.json").string());
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("stage config") != std::string::npos);
  }

  spit(dir / "noimage.json",
       run_config_text(dir / "absent.pgm", dir / "out", 1, 1, 1));
  try {
    run_pipeline((dir / "noimage.json").string());
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("stage skeletonize") != std::string::npos);
  }

  write_training_pgm(dir / "train.pgm");
  nlohmann::json j = nlohmann::json::parse(
      run_config_text(dir / "train.pgm", dir / "out", 1, 1, 1));
  j["grid"]["origin"] = {0, 0, 0};  // origin without spacing
  spit(dir / "origin.json", j.dump());
  try {
    run_pipeline((dir / "origin.json").string());
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("stage lobes") != std::string::npos);
  }
}
