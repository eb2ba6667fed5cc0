// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#include "spoofsim/kernels.hpp"

#include <cmath>

#include "spoofsim/scenario.hpp"

namespace spoofsim {

namespace {
constexpr double kPoleGuard = 1e-9;
}

double sinc(double x) {
  if (std::abs(x) < kPoleGuard) return 1.0;
  const double px = kPi * x;
  return std::sin(px) / px;
}

double dirichlet(int n, double x) {
  const double m = std::nearbyint(x / kPi);
  if (std::abs(x - m * kPi) < kPoleGuard) {
    const long long mi = static_cast<long long>(m);
    const long long e = mi * (n - 1);
    return (e % 2 == 0) ? 1.0 : -1.0;
  }
  return std::sin(n * x) / (n * std::sin(x));
}

cd tx_factor(double theta1, double theta2, int n_tx) {
  const double u = std::cos(theta1) - std::cos(theta2);
  const double phase = kPi * (n_tx - 1) / 2.0 * u;
  return std::polar(dirichlet(n_tx, kPi / 2.0 * u), phase);
}

cd rx_tx_factor(double theta1, double theta2, int n_r, int n_tx) {
  const double phase =
      -kPi / 2.0 * (std::cos(theta1) * (n_tx - 1) - std::cos(theta2) * (n_tx + 1 - 2 * n_r));
  return std::polar(dirichlet(n_tx, kPi / 2.0 * (std::cos(theta1) - std::cos(theta2))), phase);
}

}  // namespace spoofsim
