// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#pragma once

#include <vector>

#include "spoofsim/attack/oracle.hpp"

namespace spoofsim {

// Downlink rate log2(1 + P N_t |a^H(beam) a(theta)|^2 |lambda / (4 pi d)|^2 / sigma^2) in bit/s/Hz.
double achievable_rate(const ScenarioConfig& cfg, double beam, const VehicleState& truth);

struct TrackingSlot {
  int k = 0;
  double true_aod = 0.0;
  double beam_perfect = 0.0;
  double beam_spoofed = 0.0;
  double aod_perfect = 0.0;  // sensed
  double aod_spoofed = 0.0;  // sensed
  double rate_perfect = 0.0;
  double rate_spoofed = 0.0;
};

// Pairs two runs over the same ground truth and noise: the clean chain and the attacked one.
std::vector<TrackingSlot> tracking_trace(const ScenarioConfig& cfg, const SpoofPlan& perfect,
                                         const SpoofPlan& spoofed);

// 1 - sum rate_spoofed / sum rate_perfect over the first `slots` entries.
double relative_rate_loss(const std::vector<TrackingSlot>& trace, int slots);

// Largest |sensed - true| AoD of the attacked run over the first `slots` entries, radians.
double max_aod_error(const std::vector<TrackingSlot>& trace, int slots);

}  // namespace spoofsim
