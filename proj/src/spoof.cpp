// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#include "spoofsim/spoof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spoofsim {

bool FeasibleSet::empty() const { return count() == 0; }

std::size_t FeasibleSet::count() const { return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true)); }

bool spoofing_range_check(double d_vehicle, double d_ris, double max_delay) {
  return d_ris <= d_vehicle && d_vehicle <= d_ris + max_delay * kSpeedOfLight / 2.0;
}

double ris_size_threshold(const ScenarioConfig& cfg, double beam, double theta_vehicle, double theta_ris) {
  const double num = dirichlet(cfg.n_tx, kPi / 2.0 * (std::cos(beam) - std::cos(theta_vehicle)));
  const double den = dirichlet(cfg.n_tx, kPi / 2.0 * (std::cos(beam) - std::cos(theta_ris)));
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  const double k = std::sqrt(cfg.vehicle_rcs / (4.0 * kPi * cfg.ris_efficiency)) * cfg.wavelength / cfg.ris_area;
  return k * std::abs(num / den);
}

double wrap_frequency(double mu, double dT) {
  const double period = 1.0 / dT;
  double r = std::fmod(mu, period);
  if (r <= 1e-9 * period) r += period;
  return r;
}

std::vector<double> action_grid(const ScenarioConfig& cfg) {
  const int L = cfg.action_count;
  std::vector<double> g(L);
  for (int l = 1; l <= L; ++l) g[l - 1] = l / (cfg.phase_update_interval * L);
  return g;
}

double feasibility_lhs(const ScenarioConfig& cfg, const SlotGeometry& veh, const SlotGeometry& ris, double beam,
                       double f) {
  const double T = cfg.slot_duration;
  const double dT = cfg.phase_update_interval;
  const double M = cfg.ris_elements;
  const double fv = dirichlet(cfg.n_tx, kPi / 2.0 * (std::cos(beam) - std::cos(veh.aod)));
  const double fr = dirichlet(cfg.n_tx, kPi / 2.0 * (std::cos(beam) - std::cos(ris.aod)));
  const double cv = std::norm(veh.gain) * fv * fv;
  const double cr = std::norm(ris.gain) * fr * fr;
  const double s_spoof = sinc(f * dT);
  const double s_true = sinc(veh.doppler * dT);
  const double rep = dirichlet(cfg.n_phase_updates, kPi * dT * (veh.doppler - f));
  const double sv = sinc(T * (veh.doppler - f));
  return M * M * cr * (s_spoof * s_spoof - s_true * s_true * rep * rep) - cv * (1.0 - sv * sv);
}

FeasibleSet feasible_set(const ScenarioConfig& cfg, const SlotGeometry& veh, const SlotGeometry& ris, double beam,
                         const std::vector<double>& grid) {
  FeasibleSet fs;
  fs.grid_freqs = grid;
  fs.lhs_values.resize(grid.size());
  fs.mask.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    fs.lhs_values[i] = feasibility_lhs(cfg, veh, ris, beam, grid[i]);
    fs.mask[i] = fs.lhs_values[i] >= 0.0;
  }
  const double m_star = ris_size_threshold(cfg, beam, veh.aod, ris.aod);
  fs.low_confidence = !(cfg.ris_elements >= cfg.threshold_margin * m_star);
  return fs;
}

CVec delta_y(const ScenarioConfig& cfg, const SlotGeometry& veh, const SlotGeometry& ris, double beam,
             double spoof_freq) {
  const double T = cfg.slot_duration;
  const double dT = cfg.phase_update_interval;
  const double d = spoof_freq - veh.doppler;
  const cd v_scale = T * veh.gain * tx_factor(veh.aod, beam, cfg.n_tx) *
                     (std::polar(sinc(T * d), -kPi * d * T) - 1.0);
  const cd r_scale = double(cfg.ris_elements) * T * ris.gain * tx_factor(ris.aod, beam, cfg.n_tx) *
                     std::polar(sinc(spoof_freq * dT), kPi * spoof_freq * dT);
  const auto b_v = steering(veh.aod, cfg.n_rx, ArraySide::rx);
  const auto b_r = steering(ris.aod, cfg.n_rx, ArraySide::rx);
  CVec out(cfg.n_rx);
  for (int n = 0; n < cfg.n_rx; ++n) out[n] = v_scale * b_v[n] + r_scale * b_r[n];
  return out;
}

}  // namespace spoofsim
