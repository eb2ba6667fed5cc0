// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#pragma once

#include <cstdint>
#include <string>

#include "spoofsim/geometry.hpp"

namespace spoofsim {

enum class MotionPattern { straight, single_lane_change, double_lane_change };

std::string to_string(MotionPattern p);
MotionPattern parse_pattern(const std::string& s);

// Two-lane road parallel to the array axis.
struct RoadLayout {
  double lane_y[2] = {21.0, 24.5};
  double x_start_min = 1.0;
  double x_start_max = 4.0;
  double speed_min = 8.0;
  double speed_max = 15.0;
  double accel_max = 0.5;       // |a| of the slow speed drift, m/s^2
  double change_width_min = 4.0;  // sigmoid time constant, slots
  double change_width_max = 6.0;
};

// Kinematically consistent ground truth: constant-acceleration x motion, sigmoid lane changes.
Trajectory gen_ground_truth(MotionPattern pattern, int K, std::uint64_t seed, double T = 10e-3,
                            const RoadLayout& road = {});

}  // namespace spoofsim
