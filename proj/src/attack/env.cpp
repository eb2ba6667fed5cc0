// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#include "spoofsim/attack/env.hpp"

#include <cmath>
#include <stdexcept>

namespace spoofsim {

namespace {

const std::vector<double>& mle_grid() {
  static const std::vector<double> g = angle_grid(0.1);
  return g;
}

bool on_grid(const ScenarioConfig& cfg, double f) {
  const double step = 1.0 / (cfg.phase_update_interval * cfg.action_count);
  const double l = f / step;
  return std::abs(l - std::nearbyint(l)) < 1e-6 && l >= 0.5 && l <= cfg.action_count + 0.5;
}

}  // namespace

SensedState exact_sensing(const VehicleState& s, const ScenarioConfig& cfg) {
  const SlotGeometry g = channel_gains(s, cfg);
  return state_estimate(g.delay, g.doppler, g.aod, cfg);
}

FeasibleSet action_mask(const ScenarioConfig& cfg, const MdpState& state, const std::vector<double>& actions) {
  const SlotGeometry veh = channel_gains(state.true_state, cfg);
  const SlotGeometry ris = ris_geometry(cfg);
  const double beam = beam_predict(state.prev_sensed, cfg.slot_duration);
  FeasibleSet fs = feasible_set(cfg, veh, ris, beam, actions);
  if (!spoofing_range_check(veh.distance, ris.distance, cfg.ris_max_delay) || cfg.ris_elements == 0)
    fs.mask.assign(fs.mask.size(), false);
  return fs;
}

StepResult env_step(const ScenarioConfig& cfg, const MdpState& state, std::optional<double> action,
                    const VehicleState& next_true, std::uint64_t noise_seed) {
  if (action && !on_grid(cfg, *action)) throw std::invalid_argument("env_step: action off the action grid");
  const SlotGeometry veh = channel_gains(state.true_state, cfg);
  const SlotGeometry ris = ris_geometry(cfg);
  const double beam = beam_predict(state.prev_sensed, cfg.slot_duration);

  StepResult out;
  out.beam = beam;
  out.action = action;
  const bool in_range = spoofing_range_check(veh.distance, ris.distance, cfg.ris_max_delay) && cfg.ris_elements > 0;
  if (action && !in_range) out.action.reset();

  double doppler = veh.doppler;
  CVec y;
  if (out.action) {
    out.feasible = feasibility_lhs(cfg, veh, ris, beam, *out.action) >= 0.0;
    EchoOptions opt;
    opt.noise_seed = noise_seed;
    if (out.feasible) {
      doppler = *out.action;
    } else {
      opt.compensation_freq = veh.doppler;
    }
    y = compensated_echo(cfg, veh, ris, beam, *out.action, opt);
  } else {
    y = perfect_echo(cfg, veh, beam, noise_seed);
  }
  out.doppler_spoofed = doppler != veh.doppler;
  const double aod = aod_mle(y, cfg, veh.gain, beam, out.action ? MleMode::spoofed : MleMode::perfect, mle_grid());
  out.sensed = state_estimate(veh.delay, doppler, aod, cfg);
  out.consistency = consistency_vector(kinematic(state.prev_sensed), kinematic(out.sensed), cfg.consistency,
                                       cfg.slot_duration);
  out.reward = consistency_reward(out.consistency);
  out.next = {out.sensed, next_true};
  return out;
}

SensedState sense_clean(const ScenarioConfig& cfg, const SensedState& prev, const VehicleState& truth,
                        std::uint64_t noise_seed) {
  MdpState st{prev, truth};
  return env_step(cfg, st, std::nullopt, truth, noise_seed).sensed;
}

SpoofEpisode::SpoofEpisode(const ScenarioConfig& cfg, Trajectory truth, std::uint64_t noise_root)
    : cfg_(&cfg), truth_(std::move(truth)), noise_root_(noise_root) {
  if (truth_.size() < 2) throw std::invalid_argument("SpoofEpisode: trajectory needs at least two slots");
  state_ = {exact_sensing(truth_[0], cfg), truth_[1]};
}

std::uint64_t SpoofEpisode::noise_seed(int k) const { return derive_seed(noise_root_, "slot", k); }

StepResult SpoofEpisode::peek(std::optional<double> action) const {
  const VehicleState& next = k_ + 1 < length() ? truth_[k_ + 1] : truth_[k_];
  return env_step(*cfg_, state_, action, next, noise_seed(k_));
}

StepResult SpoofEpisode::step(std::optional<double> action) {
  if (done()) throw std::logic_error("SpoofEpisode: step after episode end");
  StepResult r = peek(action);
  state_ = r.next;
  ++k_;
  return r;
}

}  // namespace spoofsim
