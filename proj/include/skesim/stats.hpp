#pragma once

#include <span>
#include <string>
#include <vector>

#include "skesim/rng.hpp"
#include "skesim/skeleton.hpp"

namespace skesim {

struct UniformDistribution {
  double lo = 0.0;
  double hi = 0.0;
};

// Raw training samples plus the distributions fitted over them. The samples
// are kept so other fitting modes can be added without a format change.
struct TrainingStats {
  std::vector<double> signed_angles;  // radians, counter-clockwise from parent
  std::vector<double> lengths;        // grid units
  UniformDistribution angle_dist;
  UniformDistribution length_dist;
};

// Walks every edge: its length is always recorded; its deviation angle is
// recorded when the father node carries an arrival direction (the root's
// virtual inflow counts, a root without one contributes lengths only).
// Distributions are left unfitted. Throws ValidationError on a skeleton with
// no edges.
TrainingStats extract_samples(const Skeleton& sk);

// U[min(samples), max(samples)]. Throws ValidationError on an empty list.
UniformDistribution fit_uniform(std::span<const double> samples);

double sample(UniformDistribution dist, Rng& rng);

// extract_samples plus fit_uniform over both sample lists.
TrainingStats compute_stats(const Skeleton& sk);

void write_stats_json(const TrainingStats& stats, const std::string& path);
TrainingStats read_stats_json(const std::string& path);

}  // namespace skesim
