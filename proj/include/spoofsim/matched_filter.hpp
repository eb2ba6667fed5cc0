// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#pragma once

#include <vector>

#include "spoofsim/geometry.hpp"

namespace spoofsim {

// Kernels with a data-parallel variant pick one of these; serial is the reference.
enum class Exec { serial, parallel };

enum class FilterForm { exact, approx };

struct MatchedFilterCurve {
  std::vector<double> freqs;      // Hz
  std::vector<double> magnitude;  // C(tau_hat, mu) >= 0
  double peak_freq = 0.0;
};

// Uniform grid step, step*2, ..., up to and including `upper` (default (0, 1/dT] at 1 Hz).
std::vector<double> frequency_grid(double upper, double step);

// Doppler-domain matched-filter output at the true delay, noise term omitted.
// Setting cfg.ris_elements = 0 suppresses the RIS term.
MatchedFilterCurve matched_filter_closed(const ScenarioConfig& cfg, const SlotGeometry& vehicle,
                                         const SlotGeometry& ris, double beam, double spoof_freq,
                                         const std::vector<double>& grid,
                                         FilterForm form = FilterForm::exact,
                                         Exec exec = Exec::parallel);

// Single-frequency evaluation of the closed form.
double matched_filter_at(const ScenarioConfig& cfg, const SlotGeometry& vehicle, const SlotGeometry& ris,
                         double beam, double spoof_freq, double mu, FilterForm form);

// Brute-force reference: samples the composite echo on every receive antenna with the
// staircase RIS phase law and integrates it with the midpoint rule.
MatchedFilterCurve echo_synth_oracle(const ScenarioConfig& cfg, const SlotGeometry& vehicle,
                                     const SlotGeometry& ris, double beam, double spoof_freq,
                                     const std::vector<double>& grid, int n_samples = 10000,
                                     Exec exec = Exec::parallel);

}  // namespace spoofsim
