#include "skesim/stats.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"
#include "skesim/errors.hpp"

namespace skesim {

TrainingStats extract_samples(const Skeleton& sk) {
  if (sk.edge_count() == 0) {
    throw ValidationError("stats: skeleton has no edges");
  }
  TrainingStats out;
  for (const Edge& e : sk.edges()) {
    out.lengths.push_back(sk.edge_length(e.id));
    const Node& father = sk.node(e.father);
    if (!father.alpha.empty()) {
      out.signed_angles.push_back(
          signed_angle(father.alpha.front(), sk.edge_direction(e.id)));
    }
  }
  return out;
}

UniformDistribution fit_uniform(std::span<const double> samples) {
  if (samples.empty()) {
    throw ValidationError("fit: no samples");
  }
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  return {*lo, *hi};
}

double sample(UniformDistribution dist, Rng& rng) {
  return dist.lo + (dist.hi - dist.lo) * rng.uniform01();
}

TrainingStats compute_stats(const Skeleton& sk) {
  TrainingStats stats = extract_samples(sk);
  stats.angle_dist = fit_uniform(stats.signed_angles);
  stats.length_dist = fit_uniform(stats.lengths);
  return stats;
}

void write_stats_json(const TrainingStats& stats, const std::string& path) {
  nlohmann::json j;
  j["angles"] = stats.signed_angles;
  j["lengths"] = stats.lengths;
  j["angle_dist"] = {{"lo", stats.angle_dist.lo}, {"hi", stats.angle_dist.hi}};
  j["length_dist"] = {{"lo", stats.length_dist.lo},
                      {"hi", stats.length_dist.hi}};
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open for writing: " + path);
  }
  out << j.dump(2) << "\n";
  if (!out) {
    throw IoError("write failed: " + path);
  }
}

TrainingStats read_stats_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open: " + path);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("stats json: " + std::string(e.what()));
  }
  TrainingStats stats;
  try {
    stats.signed_angles = j.at("angles").get<std::vector<double>>();
    stats.lengths = j.at("lengths").get<std::vector<double>>();
    stats.angle_dist = {j.at("angle_dist").at("lo").get<double>(),
                        j.at("angle_dist").at("hi").get<double>()};
    stats.length_dist = {j.at("length_dist").at("lo").get<double>(),
                         j.at("length_dist").at("hi").get<double>()};
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("stats json: " + std::string(e.what()));
  }
  if (stats.angle_dist.lo > stats.angle_dist.hi ||
      stats.length_dist.lo > stats.length_dist.hi) {
    throw ValidationError("stats json: distribution with lo > hi");
  }
  for (double len : stats.lengths) {
    if (len <= 0) {
      throw ValidationError("stats json: non-positive length sample");
    }
  }
  return stats;
}

}  // namespace skesim
