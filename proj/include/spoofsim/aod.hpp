// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#pragma once

#include <vector>

#include "spoofsim/echo.hpp"
#include "spoofsim/matched_filter.hpp"

namespace spoofsim {

enum class MleMode { spoofed, perfect };

struct SensedState {
  double x = 0.0;
  double y = 0.0;
  double v = 0.0;
  double aod = 0.0;      // rad
  double doppler = 0.0;  // Hz
  double delay = 0.0;    // s
};

// Uniform angle grid over (0, pi) with the given spacing in degrees (endpoints excluded).
std::vector<double> angle_grid(double step_deg = 0.1);

// Residual ||y - T beta_V b(theta) h(theta, beam)||^2.
double aod_objective(const CVec& y, const ScenarioConfig& cfg, cd vehicle_gain, double theta, double beam);

// Grid search followed by golden-section refinement to 0.01 deg; ties go to the smaller angle.
// The mode only documents which echo is passed in: both minimize the same residual.
double aod_mle(const CVec& y, const ScenarioConfig& cfg, cd vehicle_gain, double beam, MleMode mode,
               const std::vector<double>& theta_grid, Exec exec = Exec::serial);

SensedState state_estimate(double delay, double doppler, double aod, const ScenarioConfig& cfg);

}  // namespace spoofsim
