// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#include "spoofsim/echo.hpp"

#include <cmath>
#include <string_view>

namespace spoofsim {

std::uint64_t derive_seed(std::uint64_t root, std::string_view stream, std::uint64_t index) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : stream) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(root) ^ h) ^ index);
}

CVec complex_noise(int n, double variance, Rng& rng) {
  std::normal_distribution<double> nd(0.0, std::sqrt(variance / 2.0));
  CVec z(n);
  for (auto& v : z) {
    const double re = nd(rng);
    const double im = nd(rng);
    v = cd(re, im);
  }
  return z;
}

CVec vehicle_model(const ScenarioConfig& cfg, cd gain, double theta, double beam) {
  CVec b = steering(theta, cfg.n_rx, ArraySide::rx);
  const cd scale = cfg.slot_duration * gain * tx_factor(theta, beam, cfg.n_tx);
  for (auto& e : b) e *= scale;
  return b;
}

CVec compensated_echo(const ScenarioConfig& cfg, const SlotGeometry& veh, const SlotGeometry& ris,
                      double beam, double spoof_freq, const EchoOptions& opt) {
  const double T = cfg.slot_duration;
  const double dT = cfg.phase_update_interval;
  const double nu = opt.compensation_freq.value_or(spoof_freq);

  const cd v_scale = T * veh.gain * tx_factor(veh.aod, beam, cfg.n_tx) *
                     std::polar(sinc(T * (nu - veh.doppler)), -kPi * (nu - veh.doppler) * T);
  const auto b_v = steering(veh.aod, cfg.n_rx, ArraySide::rx);
  CVec y(cfg.n_rx);
  for (int n = 0; n < cfg.n_rx; ++n) y[n] = v_scale * b_v[n];

  if (opt.ris_active && cfg.ris_elements > 0) {
    const double shape = sinc(nu * dT) * dirichlet(cfg.n_phase_updates, kPi * dT * (nu - spoof_freq));
    const cd r_scale = double(cfg.ris_elements) * T * ris.gain * tx_factor(ris.aod, beam, cfg.n_tx) *
                       std::polar(1.0, kPi * spoof_freq * dT) *
                       std::polar(shape, -kPi * (nu - spoof_freq) * T);
    const auto b_r = steering(ris.aod, cfg.n_rx, ArraySide::rx);
    for (int n = 0; n < cfg.n_rx; ++n) y[n] += r_scale * b_r[n];
  }
  if (opt.noise_seed) {
    Rng rng(*opt.noise_seed);
    const CVec z = complex_noise(cfg.n_rx, cfg.noise_variance(), rng);
    for (int n = 0; n < cfg.n_rx; ++n) y[n] += z[n];
  }
  return y;
}

CVec perfect_echo(const ScenarioConfig& cfg, const SlotGeometry& veh, double beam,
                  std::optional<std::uint64_t> noise_seed) {
  CVec y = vehicle_model(cfg, veh.gain, veh.aod, beam);
  if (noise_seed) {
    Rng rng(*noise_seed);
    const CVec z = complex_noise(cfg.n_rx, cfg.noise_variance(), rng);
    for (int n = 0; n < cfg.n_rx; ++n) y[n] += z[n];
  }
  return y;
}

}  // namespace spoofsim
