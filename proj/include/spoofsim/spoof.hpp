// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#pragma once

#include <vector>

#include "spoofsim/echo.hpp"

namespace spoofsim {

struct FeasibleSet {
  std::vector<double> grid_freqs;
  std::vector<bool> mask;
  std::vector<double> lhs_values;
  bool low_confidence = false;  // RIS smaller than margin * threshold

  bool empty() const;
  std::size_t count() const;
};

// True when the RIS delay line can align its echo with the vehicle's: d_R <= d <= d_R + dmax c / 2.
bool spoofing_range_check(double d_vehicle, double d_ris, double max_delay);

// RIS element count above which the true-Doppler replicas cannot win; +inf in a beam null.
double ris_size_threshold(const ScenarioConfig& cfg, double beam, double theta_vehicle, double theta_ris);

// mu mod 1/dT mapped into (0, 1/dT].
double wrap_frequency(double mu, double dT);

// Action grid l / (dT L), l = 1..L.
std::vector<double> action_grid(const ScenarioConfig& cfg);

FeasibleSet feasible_set(const ScenarioConfig& cfg, const SlotGeometry& vehicle, const SlotGeometry& ris,
                         double beam, const std::vector<double>& grid);

// Left-hand side of the feasibility inequality at a single frequency.
double feasibility_lhs(const ScenarioConfig& cfg, const SlotGeometry& vehicle, const SlotGeometry& ris,
                       double beam, double freq);

// Spoofed minus perfect compensated echo, noiseless.
CVec delta_y(const ScenarioConfig& cfg, const SlotGeometry& vehicle, const SlotGeometry& ris, double beam,
             double spoof_freq);

}  // namespace spoofsim
