// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#include "spoofsim/attack/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spoofsim/rng.hpp"

namespace spoofsim {

std::string to_string(MotionPattern p) {
  switch (p) {
    case MotionPattern::straight: return "straight";
    case MotionPattern::single_lane_change: return "single_lane_change";
    case MotionPattern::double_lane_change: return "double_lane_change";
  }
  return "straight";
}

MotionPattern parse_pattern(const std::string& s) {
  if (s == "straight") return MotionPattern::straight;
  if (s == "single_lane_change" || s == "single") return MotionPattern::single_lane_change;
  if (s == "double_lane_change" || s == "double") return MotionPattern::double_lane_change;
  throw std::invalid_argument("unknown motion pattern: " + s);
}

namespace {
double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }
}  // namespace

Trajectory gen_ground_truth(MotionPattern pattern, int K, std::uint64_t seed, double T, const RoadLayout& road) {
  if (K < 2) throw std::invalid_argument("gen_ground_truth: K must be at least 2");
  Rng rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * u01(rng); };

  const int lane = u01(rng) < 0.5 ? 0 : 1;
  const double y0 = road.lane_y[lane];
  const double shift = road.lane_y[1 - lane] - y0;
  const double x0 = uniform(road.x_start_min, road.x_start_max);
  const double v0 = uniform(road.speed_min, road.speed_max);
  const double accel = uniform(-road.accel_max, road.accel_max);
  const double width = uniform(road.change_width_min, road.change_width_max);
  const double on1 = pattern == MotionPattern::double_lane_change ? uniform(0.2, 0.35) * K : uniform(0.25, 0.75) * K;
  const double on2 = uniform(0.65, 0.8) * K;

  Trajectory traj(K);
  double x = x0;
  for (int k = 0; k < K; ++k) {
    double v = v0 + accel * k * T;
    v = std::clamp(v, road.speed_min, road.speed_max);
    double y = y0;
    if (pattern == MotionPattern::single_lane_change) {
      y += shift * logistic((k - on1) / width);
    } else if (pattern == MotionPattern::double_lane_change) {
      y += shift * (logistic((k - on1) / width) - logistic((k - on2) / width));
    }
    traj[k] = {x, y, v};
    x += v * T;
  }
  return traj;
}

}  // namespace spoofsim
