// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#include "spoofsim/aod.hpp"

#include <cmath>
#include <stdexcept>

namespace spoofsim {

std::vector<double> angle_grid(double step_deg) {
  std::vector<double> g;
  const long n = std::lround(180.0 / step_deg);
  g.reserve(n);
  for (long i = 1; i < n; ++i) g.push_back(deg2rad(i * step_deg));
  return g;
}

double aod_objective(const CVec& y, const ScenarioConfig& cfg, cd gain, double theta, double beam) {
  const double c = std::cos(theta);
  const double scale = 1.0 / std::sqrt(double(cfg.n_rx));
  const cd amp = cfg.slot_duration * gain * tx_factor(theta, beam, cfg.n_tx) * scale;
  // Steering phases by recurrence: one trig call per angle.
  const cd w = std::polar(1.0, -kPi * c);
  cd ph = amp;
  double acc = 0.0;
  for (int n = 0; n < cfg.n_rx; ++n) {
    acc += std::norm(y[n] - ph);
    ph *= w;
  }
  return acc;
}

double aod_mle(const CVec& y, const ScenarioConfig& cfg, cd gain, double beam, MleMode,
               const std::vector<double>& grid, Exec exec) {
  if (grid.empty()) throw std::invalid_argument("aod_mle: empty angle grid");
  if (static_cast<int>(y.size()) != cfg.n_rx) throw std::invalid_argument("aod_mle: echo length mismatch");
  bool all_zero = true;
  for (const auto& e : y)
    if (e != cd{0.0, 0.0}) all_zero = false;
  if (all_zero) throw std::invalid_argument("aod_mle: all-zero echo");

  std::vector<double> cost(grid.size());
  const long n = static_cast<long>(grid.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) cost[i] = aod_objective(y, cfg, gain, grid[i], beam);
  } else {
    for (long i = 0; i < n; ++i) cost[i] = aod_objective(y, cfg, gain, grid[i], beam);
  }
  long best = 0;
  for (long i = 1; i < n; ++i)
    if (cost[i] < cost[best]) best = i;

  const double step = n > 1 ? grid[1] - grid[0] : deg2rad(0.1);
  double lo = grid[best] - step;
  double hi = grid[best] + step;
  lo = std::max(lo, 1e-6);
  hi = std::min(hi, kPi - 1e-6);
  const double tol = deg2rad(0.01);
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - ratio * (hi - lo);
  double b = lo + ratio * (hi - lo);
  double fa = aod_objective(y, cfg, gain, a, beam);
  double fb = aod_objective(y, cfg, gain, b, beam);
  while (hi - lo > tol) {
    if (fa <= fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - ratio * (hi - lo);
      fa = aod_objective(y, cfg, gain, a, beam);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + ratio * (hi - lo);
      fb = aod_objective(y, cfg, gain, b, beam);
    }
  }
  const double refined = 0.5 * (lo + hi);
  const double f_ref = aod_objective(y, cfg, gain, refined, beam);
  return f_ref <= cost[best] ? refined : grid[best];
}

SensedState state_estimate(double delay, double doppler, double aod, const ScenarioConfig& cfg) {
  const double c = std::cos(aod);
  if (std::abs(c) < 1e-12) throw NumericalError("state_estimate: AoD at broadside leaves velocity undefined");
  const double range = cfg.position_convention == PositionConvention::half_delay ? kSpeedOfLight * delay / 2.0
                                                                                  : kSpeedOfLight * delay;
  SensedState s;
  s.x = range * c;
  s.y = range * std::sin(aod);
  s.v = doppler * kSpeedOfLight / (cfg.carrier_freq * c);
  s.aod = aod;
  s.doppler = doppler;
  s.delay = delay;
  return s;
}

}  // namespace spoofsim
