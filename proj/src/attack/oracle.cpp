// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#include "spoofsim/attack/oracle.hpp"

#include <limits>
#include <stdexcept>

namespace spoofsim {

Trajectory SpoofPlan::sensed_trajectory() const {
  Trajectory t;
  t.reserve(steps.size() + 1);
  t.push_back(kinematic(initial));
  for (const auto& s : steps) t.push_back(kinematic(s.result.sensed));
  return t;
}

double SpoofPlan::consistent_fraction() const {
  if (steps.empty()) return 1.0;
  int ok = 0;
  for (const auto& s : steps) ok += is_consistent(s.result.consistency) ? 1 : 0;
  return double(ok) / steps.size();
}

double SpoofPlan::mean_reward() const {
  if (steps.empty()) return 0.0;
  double r = 0.0;
  for (const auto& s : steps) r += s.result.reward;
  return r / steps.size();
}

namespace {

// Best cumulative reward reachable from `ep` within `depth` slots.
double best_value(const ScenarioConfig& cfg, const SpoofEpisode& ep, const std::vector<double>& actions, int depth,
                  std::optional<double>* choice) {
  const FeasibleSet fs = action_mask(cfg, ep.state(), actions);
  std::vector<std::optional<double>> candidates;
  for (std::size_t i = 0; i < actions.size(); ++i)
    if (fs.mask[i]) candidates.push_back(actions[i]);
  if (candidates.empty()) candidates.push_back(std::nullopt);

  const long n = static_cast<long>(candidates.size());
  std::vector<double> value(n);
#pragma omp parallel for schedule(dynamic) if (depth == 1 && n > 8)
  for (long i = 0; i < n; ++i) {
    SpoofEpisode next = ep;
    const StepResult r = next.step(candidates[i]);
    double v = r.reward;
    if (depth > 1 && !next.done()) v += best_value(cfg, next, actions, depth - 1, nullptr);
    value[i] = v;
  }
  long best = 0;
  for (long i = 1; i < n; ++i)
    if (value[i] > value[best]) best = i;
  if (choice) *choice = candidates[best];
  return value[best];
}

}  // namespace

SpoofPlan oracle_plan(const ScenarioConfig& cfg, const Trajectory& truth, std::uint64_t noise_root, int horizon) {
  if (horizon < 1) throw std::invalid_argument("oracle_plan: horizon must be >= 1");
  const std::vector<double> actions = action_grid(cfg);
  SpoofEpisode ep(cfg, truth, noise_root);
  SpoofPlan plan;
  plan.initial = ep.state().prev_sensed;
  while (!ep.done()) {
    std::optional<double> a;
    best_value(cfg, ep, actions, std::min(horizon, ep.length() - ep.slot()), &a);
    PlanStep s;
    s.k = ep.slot();
    s.truth = truth[s.k];
    s.result = ep.step(a);
    plan.steps.push_back(s);
  }
  return plan;
}

}  // namespace spoofsim
