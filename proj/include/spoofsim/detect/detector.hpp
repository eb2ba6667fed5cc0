// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#pragma once

#include <string>
#include <vector>

#include "spoofsim/detect/dtcr.hpp"
#include "spoofsim/stl/formula.hpp"

namespace spoofsim {

struct DetectorBundle {
  ClusterModel cluster;
  std::vector<stl::Formula> formulas;  // one per cluster
  std::vector<double> thresholds;      // benchmark distance threshold per cluster
};

struct Detection {
  bool spoofed = false;
  int cluster = 0;
  double robustness = 0.0;  // r(s_0) under the nearest cluster's formula
};

// Encode, pick the nearest center, flag when that cluster's formula is violated (r < 0).
Detection detect(const Trajectory& traj, const DetectorBundle& bundle);

struct BenchmarkDetection {
  bool spoofed = false;
  int cluster = 0;
  double distance = 0.0;
};

// Flags a trajectory whose latent code lies farther than the nearest cluster's threshold.
BenchmarkDetection benchmark_detect(const Trajectory& traj, const ClusterModel& model,
                                    const std::vector<double>& thresholds);

// Per-cluster quantile (nearest rank) of member distances to their own center.
std::vector<double> calibrate_thresholds(const ClusterModel& model, const std::vector<Trajectory>& data,
                                         double quantile = 0.95);

// Directory layout: formulas.stl, clusters.json, encoder.bin (float64, little endian), encoder.json.
void save_bundle(const DetectorBundle& bundle, const std::string& dir);
DetectorBundle load_bundle(const std::string& dir);

}  // namespace spoofsim
