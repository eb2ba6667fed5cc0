// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#pragma once

#include <optional>
#include <vector>

#include "spoofsim/geometry.hpp"
#include "spoofsim/rng.hpp"

namespace spoofsim {

using CVec = std::vector<cd>;

struct EchoOptions {
  // Frequency the RSU compensates at; defaults to the spoofing frequency itself.
  std::optional<double> compensation_freq;
  bool ris_active = true;
  std::optional<std::uint64_t> noise_seed;  // empty = noiseless
};

// Compensated, normalized receive vector after matched filtering at (tau_k, nu).
CVec compensated_echo(const ScenarioConfig& cfg, const SlotGeometry& vehicle, const SlotGeometry& ris,
                      double beam, double spoof_freq, const EchoOptions& opt = {});

// Echo compensated with the true Doppler and without the RIS: T beta_V b(theta_k) h(theta_k, beam) + noise.
CVec perfect_echo(const ScenarioConfig& cfg, const SlotGeometry& vehicle, double beam,
                  std::optional<std::uint64_t> noise_seed = std::nullopt);

// Circularly-symmetric Gaussian noise with the given per-element variance.
CVec complex_noise(int n, double variance, Rng& rng);

// Model vector T beta_V b(theta) h(theta, beam) used by the angle estimator.
CVec vehicle_model(const ScenarioConfig& cfg, cd gain, double theta, double beam);

}  // namespace spoofsim
