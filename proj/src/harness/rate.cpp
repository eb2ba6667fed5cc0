// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#include "spoofsim/harness/rate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spoofsim {

double achievable_rate(const ScenarioConfig& cfg, double beam, const VehicleState& truth) {
  const SlotGeometry g = channel_gains(truth, cfg);
  const double array = std::norm(tx_factor(beam, g.aod, cfg.n_tx));
  const double path = cfg.wavelength / (4.0 * kPi * g.distance);
  const double snr = cfg.transmit_power * cfg.n_tx * array * path * path / cfg.noise_power;
  return std::log2(1.0 + snr);
}

std::vector<TrackingSlot> tracking_trace(const ScenarioConfig& cfg, const SpoofPlan& perfect,
                                         const SpoofPlan& spoofed) {
  if (perfect.steps.size() != spoofed.steps.size())
    throw std::invalid_argument("tracking runs differ in length");
  std::vector<TrackingSlot> out;
  out.reserve(perfect.steps.size());
  for (std::size_t i = 0; i < perfect.steps.size(); ++i) {
    const PlanStep& a = perfect.steps[i];
    const PlanStep& b = spoofed.steps[i];
    TrackingSlot s;
    s.k = a.k;
    s.true_aod = channel_gains(a.truth, cfg).aod;
    s.beam_perfect = a.result.beam;
    s.beam_spoofed = b.result.beam;
    s.aod_perfect = a.result.sensed.aod;
    s.aod_spoofed = b.result.sensed.aod;
    s.rate_perfect = achievable_rate(cfg, s.beam_perfect, a.truth);
    s.rate_spoofed = achievable_rate(cfg, s.beam_spoofed, b.truth);
    out.push_back(s);
  }
  return out;
}

double relative_rate_loss(const std::vector<TrackingSlot>& trace, int slots) {
  double p = 0.0, s = 0.0;
  const int n = std::min<int>(slots, static_cast<int>(trace.size()));
  for (int i = 0; i < n; ++i) {
    p += trace[i].rate_perfect;
    s += trace[i].rate_spoofed;
  }
  return p > 0.0 ? 1.0 - s / p : 0.0;
}

double max_aod_error(const std::vector<TrackingSlot>& trace, int slots) {
  double e = 0.0;
  const int n = std::min<int>(slots, static_cast<int>(trace.size()));
  for (int i = 0; i < n; ++i) e = std::max(e, std::abs(trace[i].aod_spoofed - trace[i].true_aod));
  return e;
}

}  // namespace spoofsim
