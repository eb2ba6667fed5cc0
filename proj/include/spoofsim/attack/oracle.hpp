// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#pragma once

#include <vector>

#include "spoofsim/attack/env.hpp"

namespace spoofsim {

struct PlanStep {
  int k = 0;
  VehicleState truth;
  StepResult result;
};

struct SpoofPlan {
  std::vector<PlanStep> steps;
  SensedState initial;

  // Sensed trajectory including the clean initial slot.
  Trajectory sensed_trajectory() const;
  double consistent_fraction() const;
  double mean_reward() const;
};

// Exhaustive masked search: per slot, the action (or h-step action sequence) with the highest
// cumulative reward; ties go to the lowest frequency. Empty masks record an idle RIS slot.
SpoofPlan oracle_plan(const ScenarioConfig& cfg, const Trajectory& truth, std::uint64_t noise_root, int horizon = 1);

}  // namespace spoofsim
