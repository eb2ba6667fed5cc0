// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#pragma once

#include <vector>

#include "spoofsim/geometry.hpp"
#include "spoofsim/matched_filter.hpp"
#include "spoofsim/stl/formula.hpp"

namespace spoofsim::stl {

// Feature vector (x, y, v) of one slot.
Coeffs features(const VehicleState& s);

// Exact quantitative semantics at slot k. Throws StlError naming the operator path
// (for example "root/&[1]/G[30,31]") when a window leaves [0, K-1].
double robustness(const Trajectory& traj, const Formula& f, int k = 0);

// r(s_k, f) for every k; NaN where the formula's horizon does not fit.
std::vector<double> robustness_trace(const Trajectory& traj, const Formula& f);

bool satisfies(const Trajectory& traj, const Formula& f);

// r(s_0, f) for every trajectory.
std::vector<double> batch_robustness(const std::vector<Trajectory>& data, const Formula& f,
                                     Exec exec = Exec::parallel);

// Labels: true = in-class. Counts satisfied out-of-class plus violated in-class samples.
double misclassification_rate(const std::vector<Trajectory>& data, const std::vector<bool>& in_class,
                              const Formula& f);

}  // namespace spoofsim::stl
