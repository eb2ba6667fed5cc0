// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#pragma once

#include <vector>

#include "spoofsim/kernels.hpp"
#include "spoofsim/scenario.hpp"

namespace spoofsim {

// Per-slot kinematic state; v is the x-axis velocity component.
struct VehicleState {
  double x = 0.0;
  double y = 0.0;
  double v = 0.0;

  bool operator==(const VehicleState&) const = default;
};

using Trajectory = std::vector<VehicleState>;

// Derived per-slot path quantities for the vehicle or the (static) RIS.
struct SlotGeometry {
  double distance = 0.0;  // m
  double aod = 0.0;       // rad
  double delay = 0.0;     // s, round trip
  double doppler = 0.0;   // Hz, zero for the RIS
  cd gain{0.0, 0.0};
};

enum class ArraySide { tx, rx };

// Half-wavelength ULA steering vector, element i = exp(-j pi i cos(theta)) / sqrt(n).
std::vector<cd> steering(double theta, int n, ArraySide side = ArraySide::tx);

SlotGeometry channel_gains(const VehicleState& s, const ScenarioConfig& cfg);
SlotGeometry ris_geometry(const ScenarioConfig& cfg);

// Round-trip path gain sqrt(lambda^2 kappa / (64 pi^3 d^4)) exp(j 4 pi d / lambda).
cd path_gain(double distance, double rcs, double wavelength);

double doppler_of(double v, double theta, const ScenarioConfig& cfg);

}  // namespace spoofsim
