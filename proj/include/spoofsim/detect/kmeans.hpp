// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace spoofsim {

struct KMeansResult {
  std::vector<int> labels;     // per row
  Eigen::MatrixXd centers;     // P x dim
  double inertia = 0.0;
  int restarts_used = 0;
};

class ClusteringError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Lloyd iterations from k-means++ seeds until the largest center shift drops below tol.
// Keeps the lowest-inertia run among `restarts` seeded runs that leave no cluster empty.
KMeansResult kmeans(const Eigen::MatrixXd& rows, int P, std::uint64_t seed, int restarts = 10, double tol = 1e-6,
                    int max_iter = 300);

}  // namespace spoofsim
