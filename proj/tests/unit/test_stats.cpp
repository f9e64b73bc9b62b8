#include "skesim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "doctest.h"
#include "skesim/errors.hpp"
#include "skesim/extract.hpp"
#include "skesim/image.hpp"

using namespace skesim;

namespace {

constexpr double kPi = std::numbers::pi;

// Trunk arriving at a junction that splits symmetrically; the root carries no
// inflow, so only the two child edges contribute angles.
Skeleton trunk_with_fork(double half_angle) {
  Skeleton sk;
  const NodeId r = sk.add_node({0, 0}, 1);
  const NodeId j = sk.add_node({10, 0}, 3);
  const Vec2 up = rotated({1, 0}, half_angle);
  const Vec2 dn = rotated({1, 0}, -half_angle);
  const NodeId a = sk.add_node(sk.node(j).p + 8 * up, 1);
  const NodeId b = sk.add_node(sk.node(j).p + 8 * dn, 1);
  sk.node(r).is_root = true;
  sk.set_root(r);
  sk.add_edge(r, j);
  sk.add_edge(j, a);
  sk.add_edge(j, b);
  return sk;
}

}  // namespace

TEST_CASE("fork angles come out signed") {
  const Skeleton sk = trunk_with_fork(kPi / 6);
  const TrainingStats stats = extract_samples(sk);
  REQUIRE(stats.signed_angles.size() == 2);
  REQUIRE(stats.lengths.size() == 3);
  auto angles = stats.signed_angles;
  std::sort(angles.begin(), angles.end());
  CHECK(angles[0] == doctest::Approx(-kPi / 6).epsilon(1e-12));
  CHECK(angles[1] == doctest::Approx(kPi / 6).epsilon(1e-12));
}

TEST_CASE("single edge with root inflow along it") {
  Skeleton sk;
  const NodeId r = sk.add_node({0, 0}, 2);
  const NodeId s = sk.add_node({7, 0}, 1);
  sk.node(r).is_root = true;
  sk.node(r).virtual_inflows = 1;
  sk.node(r).alpha.push_back({1, 0});
  sk.set_root(r);
  sk.add_edge(r, s);
  const TrainingStats stats = extract_samples(sk);
  REQUIRE(stats.signed_angles.size() == 1);
  CHECK(stats.signed_angles[0] == doctest::Approx(0.0));
  REQUIRE(stats.lengths.size() == 1);
  CHECK(stats.lengths[0] == doctest::Approx(7.0));
}

TEST_CASE("y graph angles match hand trigonometry") {
  // Same raster as the extraction tests: tail down from (5,5) to (5,9), arms
  // to (1,1) and (9,1). Arrival at the junction points up, arms deviate by
  // one eighth turn each way; the trunk deviates zero from the root inflow.
  BinaryImage img(11, 11);
  for (int y = 5; y <= 9; ++y) {
    img.set(5, y, true);
  }
  for (int d = 1; d <= 4; ++d) {
    img.set(5 - d, 5 - d, true);
    img.set(5 + d, 5 - d, true);
  }
  const ExtractResult r = extract_graph(PixelSkeleton{img}, {5, 9});
  const TrainingStats stats = extract_samples(r.skeleton);
  REQUIRE(stats.signed_angles.size() == 3);
  REQUIRE(stats.lengths.size() == 3);

  auto angles = stats.signed_angles;
  std::sort(angles.begin(), angles.end());
  CHECK(angles[0] == doctest::Approx(-kPi / 4).epsilon(1e-12));
  CHECK(angles[1] == doctest::Approx(0.0));
  CHECK(angles[2] == doctest::Approx(kPi / 4).epsilon(1e-12));

  auto lengths = stats.lengths;
  std::sort(lengths.begin(), lengths.end());
  CHECK(lengths[0] == doctest::Approx(4.0));
  CHECK(lengths[1] == doctest::Approx(4.0 * std::sqrt(2.0)));
  CHECK(lengths[2] == doctest::Approx(4.0 * std::sqrt(2.0)));
}

TEST_CASE("extract_samples rejects an edgeless skeleton") {
  Skeleton sk;
  sk.add_node({0, 0}, 1);
  sk.set_root(0);
  CHECK_THROWS_AS(extract_samples(sk), ValidationError);
}

TEST_CASE("fit_uniform spans the samples") {
  const std::vector<double> s{2, 5, 3};
  const UniformDistribution d = fit_uniform(s);
  CHECK(d.lo == doctest::Approx(2.0));
  CHECK(d.hi == doctest::Approx(5.0));
}

TEST_CASE("fit_uniform degenerate and empty") {
  const std::vector<double> one{4};
  const UniformDistribution d = fit_uniform(one);
  CHECK(d.lo == doctest::Approx(4.0));
  CHECK(d.hi == doctest::Approx(4.0));
  CHECK_THROWS_AS(fit_uniform(std::vector<double>{}), ValidationError);
}

TEST_CASE("sample stays in support and hits the mean") {
  Rng rng(123);
  const UniformDistribution unit{0, 1};
  double sum = 0;
  for (int i = 0; i < 10000; ++i) {
    const double x = sample(unit, rng);
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
    sum += x;
  }
  CHECK(std::abs(sum / 10000 - 0.5) < 0.02);

  Rng rng2(5);
  const UniformDistribution degenerate{4, 4};
  CHECK(sample(degenerate, rng2) == doctest::Approx(4.0));
}

TEST_CASE("same seed same draw sequence") {
  const UniformDistribution d{-3, 11};
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    REQUIRE(sample(d, a) == sample(d, b));
  }
}

TEST_CASE("fitted support covers every extracted angle") {
  const Skeleton sk = trunk_with_fork(0.3);
  const TrainingStats stats = compute_stats(sk);
  for (double a : stats.signed_angles) {
    CHECK(a >= stats.angle_dist.lo);
    CHECK(a <= stats.angle_dist.hi);
  }
  for (double len : stats.lengths) {
    CHECK(len >= stats.length_dist.lo);
    CHECK(len <= stats.length_dist.hi);
  }
}

TEST_CASE("angle multiset is invariant under rigid motion") {
  const Skeleton sk = trunk_with_fork(kPi / 5);
  auto base = extract_samples(sk).signed_angles;
  std::sort(base.begin(), base.end());
  Rng rng(7);
  for (int i = 0; i < 25; ++i) {
    const double rot = rng.uniform(-kPi, kPi);
    const Vec2 shift{rng.uniform(-100, 100), rng.uniform(-100, 100)};
    auto moved = extract_samples(transformed(sk, rot, shift)).signed_angles;
    std::sort(moved.begin(), moved.end());
    REQUIRE(moved.size() == base.size());
    for (std::size_t k = 0; k < base.size(); ++k) {
      REQUIRE(std::abs(moved[k] - base[k]) <= 1e-9);
    }
  }
}

TEST_CASE("stats json round trip") {
  const Skeleton sk = trunk_with_fork(0.25);
  const TrainingStats stats = compute_stats(sk);
  const std::string path = "stats_roundtrip_test.json";
  write_stats_json(stats, path);
  const TrainingStats back = read_stats_json(path);
  std::remove(path.c_str());
  REQUIRE(back.signed_angles.size() == stats.signed_angles.size());
  for (std::size_t i = 0; i < stats.signed_angles.size(); ++i) {
    CHECK(back.signed_angles[i] == doctest::Approx(stats.signed_angles[i]));
  }
  CHECK(back.length_dist.lo == doctest::Approx(stats.length_dist.lo));
  CHECK(back.length_dist.hi == doctest::Approx(stats.length_dist.hi));
}

TEST_CASE("stats json rejects malformed input") {
  const std::string path = "stats_bad_test.json";
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    std::fputs("{\"angles\": [0.1]}", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(read_stats_json(path), ValidationError);
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    std::fputs("not json at all", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(read_stats_json(path), ValidationError);
  std::remove(path.c_str());
}
