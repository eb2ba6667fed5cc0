// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#include "spoofsim/detect/kmeans.hpp"

#include <limits>
#include <random>

#include "spoofsim/rng.hpp"

namespace spoofsim {

using Eigen::MatrixXd;

namespace {

MatrixXd plus_plus(const MatrixXd& X, int P, Rng& rng) {
  const Eigen::Index n = X.rows();
  MatrixXd C(P, X.cols());
  C.row(0) = X.row(std::uniform_int_distribution<Eigen::Index>(0, n - 1)(rng));
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  for (int c = 1; c < P; ++c) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], (X.row(i) - C.row(c - 1)).squaredNorm());
      total += d2[i];
    }
    Eigen::Index pick = 0;
    if (total > 0.0) {
      double u = std::uniform_real_distribution<double>(0.0, total)(rng);
      for (pick = 0; pick < n - 1; ++pick) {
        u -= d2[pick];
        if (u <= 0.0) break;
      }
    } else {
      pick = std::uniform_int_distribution<Eigen::Index>(0, n - 1)(rng);
    }
    C.row(c) = X.row(pick);
  }
  return C;
}

}  // namespace

KMeansResult kmeans(const MatrixXd& X, int P, std::uint64_t seed, int restarts, double tol, int max_iter) {
  const Eigen::Index n = X.rows();
  if (P < 1 || n < P) throw ClusteringError("k-means needs at least P rows");
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  int valid = 0;
  for (int run = 0; run < restarts; ++run) {
    Rng rng = make_rng(seed, "kmeans", static_cast<std::uint64_t>(run));
    MatrixXd C = plus_plus(X, P, rng);
    std::vector<int> lab(n, 0);
    bool empty = false;
    for (int it = 0; it < max_iter; ++it) {
      for (Eigen::Index i = 0; i < n; ++i) {
        double bd = std::numeric_limits<double>::infinity();
        for (int c = 0; c < P; ++c) {
          const double d = (X.row(i) - C.row(c)).squaredNorm();
          if (d < bd) {
            bd = d;
            lab[i] = c;
          }
        }
      }
      MatrixXd next = MatrixXd::Zero(P, X.cols());
      std::vector<int> count(P, 0);
      for (Eigen::Index i = 0; i < n; ++i) {
        next.row(lab[i]) += X.row(i);
        ++count[lab[i]];
      }
      empty = false;
      for (int c = 0; c < P; ++c) {
        if (count[c] == 0) {
          empty = true;
          next.row(c) = C.row(c);
        } else {
          next.row(c) /= count[c];
        }
      }
      const double shift = (next - C).rowwise().norm().maxCoeff();
      C = next;
      if (empty || shift < tol) break;
    }
    if (empty) continue;
    double inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) inertia += (X.row(i) - C.row(lab[i])).squaredNorm();
    ++valid;
    if (inertia < best.inertia) {
      best.inertia = inertia;
      best.labels = lab;
      best.centers = C;
    }
  }
  if (valid == 0) throw ClusteringError("k-means left a cluster empty in every restart");
  best.restarts_used = restarts;
  return best;
}

}  // namespace spoofsim
