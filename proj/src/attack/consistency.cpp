// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#include "spoofsim/attack/consistency.hpp"

#include <cmath>
#include <stdexcept>

namespace spoofsim {

ConsistencyVector consistency_vector(const VehicleState& a, const VehicleState& b, const ConsistencyParams& p,
                                     double T) {
  const double dv = b.v - a.v;
  return {p.a_max * T - dv, dv - p.a_min * T, p.delta_x - std::abs(b.x - a.x - a.v * T),
          p.delta_y - std::abs(b.y - a.y)};
}

double consistency_reward(const ConsistencyVector& c) {
  double r = 0.0;
  for (double ci : c) r += std::min(0.0, ci);
  return r;
}

bool is_consistent(const ConsistencyVector& c) {
  for (double ci : c)
    if (ci < 0.0) return false;
  return true;
}

VehicleState kinematic(const SensedState& s) { return {s.x, s.y, s.v}; }

double beam_predict(const SensedState& prev, double T) {
  const double r = std::hypot(prev.x, prev.y);
  if (!(r > 0.0)) throw std::invalid_argument("beam_predict: zero sensed range");
  return prev.aod - prev.v * std::sin(prev.aod) * T / r;
}

}  // namespace spoofsim
