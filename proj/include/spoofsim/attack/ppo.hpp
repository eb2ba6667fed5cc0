// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "spoofsim/attack/oracle.hpp"
#include "spoofsim/attack/policy.hpp"
#include "spoofsim/attack/trajectory.hpp"

namespace spoofsim {

struct PpoConfig {
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double clip = 0.2;
  double lr = 3e-4;
  int epochs = 10;
  int episodes_per_update = 32;
  int episodes = 600;
  int minibatch = 256;
  double entropy_coef = 0.01;
  double value_coef = 0.5;
  double alpha = 0.01;  // mask floor
  bool masked = true;
  int hidden = 64;
  int trajectory_length = 67;
};

struct PpoStats {
  std::vector<double> mean_reward;            // per episode, over decision slots
  std::vector<double> effective_reward;       // per episode, over slots with a spoofed Doppler
  std::vector<double> infeasible_fraction;    // per episode
  std::vector<double> consistent_fraction;    // per episode
};

struct PpoResult {
  PolicyNet policy;
  PpoStats stats;
};

// Clipped-surrogate PPO over ground-truth episodes drawn from the three motion patterns.
PpoResult ppo_train(const ScenarioConfig& cfg, const PpoConfig& hp, std::uint64_t seed,
                    const std::function<void(int, double)>& on_episode = {});

// Action index from the (optionally masked) policy: sampled when rng is given, argmax otherwise.
// Returns empty when the mask is all false in masked mode.
std::optional<int> policy_action(const PolicyNet& net, const MdpState& state, const std::vector<bool>& mask,
                                 bool masked, double alpha, Rng* rng);

// Runs a full episode with the policy (greedy) and returns the same record the oracle produces.
SpoofPlan policy_plan(const ScenarioConfig& cfg, const PolicyNet& net, const Trajectory& truth,
                      std::uint64_t noise_root, bool masked = true, double alpha = 0.01);

}  // namespace spoofsim
