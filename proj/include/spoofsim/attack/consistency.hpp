// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#pragma once

#include <array>

#include "spoofsim/aod.hpp"
#include "spoofsim/geometry.hpp"

namespace spoofsim {

using ConsistencyVector = std::array<double, 4>;

// [a_max T - dv, dv - a_min T, dx_tol - |dx - v_a T|, dy_tol - |dy|]; non-negative entries mean plausible.
ConsistencyVector consistency_vector(const VehicleState& a, const VehicleState& b, const ConsistencyParams& p,
                                     double T);

// Sum of the violated (negative) entries.
double consistency_reward(const ConsistencyVector& c);
bool is_consistent(const ConsistencyVector& c);

VehicleState kinematic(const SensedState& s);

// Next transmit beam from the previous sensed state, using the sensed range in the denominator.
double beam_predict(const SensedState& prev, double T);

}  // namespace spoofsim
