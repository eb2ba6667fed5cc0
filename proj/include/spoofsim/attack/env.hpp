// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spoofsim/attack/consistency.hpp"
#include "spoofsim/spoof.hpp"

namespace spoofsim {

// Markov state: the RSU's previous sensed state and the vehicle's current true state.
struct MdpState {
  SensedState prev_sensed;
  VehicleState true_state;
};

struct StepResult {
  MdpState next;
  double reward = 0.0;
  SensedState sensed;
  ConsistencyVector consistency{};
  double beam = 0.0;
  std::optional<double> action;  // empty = RIS idle this slot
  bool feasible = false;          // action inside the feasible set
  bool doppler_spoofed = false;   // realized Doppler differs from the true one
};

// Feasibility mask seen by the attacker for the current slot; all false outside the spoofing range.
FeasibleSet action_mask(const ScenarioConfig& cfg, const MdpState& state, const std::vector<double>& actions);

// One sensing slot: beam prediction, spoofed echo, AoD estimate, sensed state, consistency reward.
// `action` is a frequency on the action grid or empty for no spoofing.
StepResult env_step(const ScenarioConfig& cfg, const MdpState& state, std::optional<double> action,
                    const VehicleState& next_true, std::uint64_t noise_seed);

// Clean sensing chain (RIS idle) for the defender's normal data.
SensedState sense_clean(const ScenarioConfig& cfg, const SensedState& prev, const VehicleState& truth,
                        std::uint64_t noise_seed);

// Episode bookkeeping over a ground-truth trajectory with per-slot noise seeds.
class SpoofEpisode {
 public:
  SpoofEpisode(const ScenarioConfig& cfg, Trajectory truth, std::uint64_t noise_root);

  int length() const { return static_cast<int>(truth_.size()); }
  int slot() const { return k_; }
  bool done() const { return k_ >= length(); }
  const MdpState& state() const { return state_; }
  const Trajectory& truth() const { return truth_; }
  std::uint64_t noise_seed(int k) const;

  // Advances by one slot and returns the step record.
  StepResult step(std::optional<double> action);
  // Evaluates an action for the current slot without advancing.
  StepResult peek(std::optional<double> action) const;

 private:
  const ScenarioConfig* cfg_;
  Trajectory truth_;
  std::uint64_t noise_root_;
  MdpState state_;
  int k_ = 1;
};

SensedState exact_sensing(const VehicleState& s, const ScenarioConfig& cfg);

}  // namespace spoofsim
