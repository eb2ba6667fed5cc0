// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
//
// Acceptance suite: one PASS/FAIL line per criterion, thresholds pinned below.
// Usage: acceptance_tests [criterion numbers...]   (default: all)
// Exit status is the number of failing criteria.

#include <algorithm>
#include <cstdarg>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "spoofsim/attack/ppo.hpp"
#include "spoofsim/harness/experiments.hpp"
#include "spoofsim/harness/rate.hpp"
#include "spoofsim/matched_filter.hpp"
#include "spoofsim/stl/parse.hpp"
#include "spoofsim/stl/robustness.hpp"
#include "spoofsim/stl/smooth.hpp"

#ifndef SPOOFSIM_CLI
#define SPOOFSIM_CLI "spoofsim"
#endif

using namespace spoofsim;
namespace fs = std::filesystem;

namespace {

// ---- pinned tolerances ----
constexpr double kOracleRelTol = 1e-3;
constexpr double kOracleSeconds = 30.0;
constexpr double kWindowLo = 78.5, kWindowHi = 83.5, kWindowStep = 0.5;
constexpr double kMinSpoofVelocity = 50.0;
constexpr int kBiasTrials = 200;
constexpr double kMinSpoofBias = 8.0;
constexpr double kMaxCleanBias = 0.5;
constexpr double kBiasSeconds = 300.0;
constexpr int kReplicaScenarios = 10;
constexpr double kRisMargin = 10.0;
constexpr double kSignViolationRate = 0.01;
constexpr int kPpoEpisodes = 600;
constexpr int kAttackEvalTrajectories = 20;
constexpr int kOracleEvalTrajectories = 6;
constexpr double kMinConsistent = 0.90;
constexpr double kMinVelocityError = 5.0;
constexpr double kMinUnmaskedInfeasible = 0.50;
constexpr int kInfeasibleWindow = 50;  // last episodes averaged for the unmasked baseline
constexpr double kTrainingSeconds = 1800.0;
constexpr int kTrackSegment = 25;
constexpr double kMinRateLoss = 0.20;
constexpr int kStlInstances = 1000;
constexpr double kGradRelTol = 1e-4;
constexpr double kMinStlAccuracy = 0.65;
constexpr double kMinMargin = 0.20;
constexpr double kPipelineSeconds = 3600.0;
constexpr int kPurityPerPattern = 60;
constexpr double kMinPurity = 0.80;
constexpr double kMaxOrthoError = 1e-6;
constexpr std::uint64_t kSeed = 7;

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

const ScenarioConfig& scenario() {
  static const ScenarioConfig cfg = default_scenario();
  return cfg;
}

// ---- 1 ----
Outcome closed_form_vs_oracle() {
  const ScenarioConfig& cfg = scenario();
  const SlotGeometry veh = channel_gains(reference_vehicle(), cfg);
  const SlotGeometry ris = ris_geometry(cfg);
  const auto grid = frequency_grid(1.0 / cfg.phase_update_interval, 1.0);
  double worst = 0.0, seconds = 0.0;
  for (double beam : {82.0, 85.0}) {
    const auto t0 = Clock::now();
    const auto c = matched_filter_closed(cfg, veh, ris, deg2rad(beam), 700.0, grid, FilterForm::exact, Exec::serial);
    const auto o = echo_synth_oracle(cfg, veh, ris, deg2rad(beam), 700.0, grid, 10000, Exec::serial);
    seconds = std::max(seconds, since(t0));
    for (std::size_t i = 0; i < grid.size(); ++i)
      worst = std::max(worst, std::abs(c.magnitude[i] - o.magnitude[i]) / o.magnitude[i]);
  }
  return {worst <= kOracleRelTol && seconds <= kOracleSeconds,
          fmt("max pointwise relative error %.2e (<= %.0e) over %zu Hz grid, %.1f s serial (<= %.0f s)", worst,
              kOracleRelTol, grid.size(), seconds, kOracleSeconds)};
}

// ---- 2 ----
Outcome feasible_window() {
  const ScenarioConfig& cfg = scenario();
  std::vector<double> window;
  for (double t = kWindowLo; t <= kWindowHi + 1e-9; t += kWindowStep) window.push_back(t);
  int nonempty_inside = 0;
  for (const auto& r : feasible_sweep(cfg, reference_vehicle(), window)) nonempty_inside += r.feasible;
  std::map<double, double> vmax;
  std::map<double, int> count;
  for (const auto& r : feasible_sweep(cfg, reference_vehicle(), {77.0, 85.0})) {
    if (!r.feasible) continue;
    count[r.theta0_deg] += 1;
    vmax[r.theta0_deg] = std::max(vmax[r.theta0_deg], std::abs(r.spoofed_velocity));
  }
  const bool edges = count[77.0] > 0 && count[85.0] > 0 && vmax[77.0] >= kMinSpoofVelocity &&
                     vmax[85.0] >= kMinSpoofVelocity;
  return {nonempty_inside == 0 && edges,
          fmt("feasible points inside [%.1f, %.1f] deg: %d (need 0); 77 deg: %d points, max %.1f m/s; 85 deg: %d "
              "points, max %.1f m/s (need >= %.0f)",
              kWindowLo, kWindowHi, nonempty_inside, count[77.0], vmax[77.0], count[85.0], vmax[85.0],
              kMinSpoofVelocity)};
}

// ---- 3 ----
Outcome aod_bias() {
  const ScenarioConfig& cfg = scenario();
  const auto t0 = Clock::now();
  std::vector<double> deltas;
  for (double d = 600.0; d <= 1000.0 + 1e-9; d += 50.0) deltas.push_back(d);
  const double truth = rad2deg(channel_gains(reference_vehicle(), cfg).aod);
  const auto spoofed = aod_trials(cfg, reference_vehicle(), 85.0, deltas, kBiasTrials, kSeed, true);
  const auto clean = aod_trials(cfg, reference_vehicle(), 82.0, {0.0}, kBiasTrials, kSeed, false);
  const double bias = mean_abs_bias(spoofed, truth);
  const double signed_bias = mean_signed_bias(spoofed, truth);
  const double clean_bias = mean_signed_bias(clean, truth);
  const double seconds = since(t0);
  return {bias >= kMinSpoofBias && std::abs(clean_bias) <= kMaxCleanBias && seconds <= kBiasSeconds,
          fmt("85 deg spoofed: mean |bias| %.2f deg (>= %.0f; signed %+.2f, toward the RIS); 82 deg unspoofed: "
              "%+.3f deg (|.| <= %.1f); %.1f s",
              bias, kMinSpoofBias, signed_bias, clean_bias, kMaxCleanBias, seconds)};
}

// ---- 4 ----
struct RandomSlot {
  ScenarioConfig cfg;
  SlotGeometry veh, ris;
  double beam = 0.0;
};

RandomSlot random_slot(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ux(-5.0, 15.0), uy(20.0, 26.0), uv(6.0, 16.0), off(-4.0, 4.0);
  for (;;) {
    RandomSlot s;
    s.cfg = scenario();
    s.veh = channel_gains(VehicleState{ux(rng), uy(rng), uv(rng)}, s.cfg);
    s.ris = ris_geometry(s.cfg);
    s.beam = s.veh.aod + deg2rad(off(rng));
    const double m_star = ris_size_threshold(s.cfg, s.beam, s.veh.aod, s.ris.aod);
    if (!std::isfinite(m_star)) continue;
    s.cfg.ris_elements = std::max(1, static_cast<int>(std::ceil(kRisMargin * m_star)));
    return s;
  }
}

Outcome replica_suites() {
  std::mt19937_64 rng(kSeed);
  int dominance_checked = 0, dominance_violations = 0, peak_checked = 0, peak_violations = 0;
  for (int s = 0; s < kReplicaScenarios; ++s) {
    const RandomSlot slot = random_slot(rng);
    const double dT = slot.cfg.phase_update_interval;
    // Replicas of the true Doppler never beat the true Doppler.
    for (int n = -3; n <= 4; ++n) {
      if (n == 0) continue;
      const double spoof = slot.veh.doppler + n / dT;
      if (spoof <= 0.0) continue;
      const double at_true =
          matched_filter_at(slot.cfg, slot.veh, slot.ris, slot.beam, spoof, slot.veh.doppler, FilterForm::exact);
      const double at_spoof = matched_filter_at(slot.cfg, slot.veh, slot.ris, slot.beam, spoof, spoof, FilterForm::exact);
      ++dominance_checked;
      dominance_violations += at_true < at_spoof;
    }
    // On the time-domain oracle, the highest replica center over (0, 3/dT] is the wrapped frequency.
    std::uniform_real_distribution<double> uf(1.0, 3.0 / dT);
    for (int t = 0; t < 5; ++t) {
      const double spoof = uf(rng);
      const double wrapped = wrap_frequency(spoof, dT);
      std::vector<double> centers;
      for (int n = 0; n < 3; ++n) centers.push_back(wrapped + n / dT);
      const auto curve = echo_synth_oracle(slot.cfg, slot.veh, slot.ris, slot.beam, spoof, centers);
      const auto best = std::max_element(curve.magnitude.begin(), curve.magnitude.end()) - curve.magnitude.begin();
      ++peak_checked;
      peak_violations += best != 0;
    }
  }
  return {dominance_violations == 0 && peak_violations == 0,
          fmt("%d scenarios with M >= %.0f M*: dominance %d/%d violations, wrapped peak %d/%d violations", kReplicaScenarios,
              kRisMargin, dominance_violations, dominance_checked, peak_violations, peak_checked)};
}

// ---- 5 ----
Outcome feasible_sign_test() {
  const ScenarioConfig& cfg = scenario();
  const SlotGeometry veh = channel_gains(reference_vehicle(), cfg);
  const SlotGeometry ris = ris_geometry(cfg);
  int total = 0, violations = 0;
  for (double th = 76.0; th <= 86.0 + 1e-9; th += 0.5) {
    const FeasibleSet fs = feasible_set(cfg, veh, ris, deg2rad(th), action_grid(cfg));
    for (std::size_t i = 0; i < fs.grid_freqs.size(); ++i) {
      if (!fs.mask[i]) continue;
      const double f = fs.grid_freqs[i];
      const double c_spoof = matched_filter_at(cfg, veh, ris, deg2rad(th), f, f, FilterForm::exact);
      const double c_true = matched_filter_at(cfg, veh, ris, deg2rad(th), f, veh.doppler, FilterForm::exact);
      ++total;
      violations += c_spoof < c_true;
    }
  }
  const double rate = total ? double(violations) / total : 1.0;
  return {total > 0 && rate <= kSignViolationRate,
          fmt("%d of %d masked-feasible points have C(spoof) < C(true) (%.3f%%, <= %.0f%%)", violations, total,
              100.0 * rate, 100.0 * kSignViolationRate)};
}

// ---- 6 / 7 shared ----
struct TrainedAttacker {
  PpoResult result;
  double seconds = 0.0;
};

const TrainedAttacker& ppo_attacker(bool masked) {
  static std::map<bool, TrainedAttacker> cache;
  auto it = cache.find(masked);
  if (it != cache.end()) return it->second;
  PpoConfig hp;
  hp.episodes = kPpoEpisodes;
  hp.masked = masked;
  hp.trajectory_length = scenario().trajectory_length;
  const auto t0 = Clock::now();
  TrainedAttacker t{ppo_train(scenario(), hp, derive_seed(kSeed, "ppo")), 0.0};
  t.seconds = since(t0);
  return cache.emplace(masked, std::move(t)).first->second;
}

struct AttackStats {
  double consistent = 0.0;
  double median_v_error = 0.0;
};

AttackStats attack_stats(const std::function<SpoofPlan(const Trajectory&, std::uint64_t)>& run, int n) {
  const ScenarioConfig& cfg = scenario();
  int ok = 0, total = 0;
  std::vector<double> verr;
  for (int i = 0; i < n; ++i) {
    const Trajectory truth = gen_ground_truth(static_cast<MotionPattern>(i % 3), cfg.trajectory_length,
                                              derive_seed(kSeed, "accept.attack.truth", i), cfg.slot_duration);
    const SpoofPlan plan = run(truth, derive_seed(kSeed, "accept.attack.noise", i));
    for (const auto& s : plan.steps) {
      ok += is_consistent(s.result.consistency);
      ++total;
      verr.push_back(std::abs(s.result.sensed.v - s.truth.v));
    }
  }
  std::sort(verr.begin(), verr.end());
  return {double(ok) / total, verr[verr.size() / 2]};
}

Outcome attack_plausibility() {
  const ScenarioConfig& cfg = scenario();
  const TrainedAttacker& masked = ppo_attacker(true);
  const TrainedAttacker& unmasked = ppo_attacker(false);
  const AttackStats ppo = attack_stats(
      [&](const Trajectory& t, std::uint64_t n) { return policy_plan(cfg, masked.result.policy, t, n); },
      kAttackEvalTrajectories);
  const AttackStats oracle =
      attack_stats([&](const Trajectory& t, std::uint64_t n) { return oracle_plan(cfg, t, n); }, kOracleEvalTrajectories);
  const auto& inf = unmasked.result.stats.infeasible_fraction;
  double infeasible = 0.0;
  const int from = std::max(0, static_cast<int>(inf.size()) - kInfeasibleWindow);
  for (int i = from; i < static_cast<int>(inf.size()); ++i) infeasible += inf[i];
  infeasible /= std::max(1, static_cast<int>(inf.size()) - from);

  auto plausible = [](const AttackStats& s) {
    return s.consistent >= kMinConsistent && s.median_v_error >= kMinVelocityError;
  };
  const bool pass = (plausible(ppo) || plausible(oracle)) && infeasible >= kMinUnmaskedInfeasible &&
                    masked.seconds <= kTrainingSeconds && unmasked.seconds <= kTrainingSeconds;
  return {pass, fmt("masked PPO: %.1f%% consistent, median |dv| %.2f m/s; oracle: %.1f%% consistent, median |dv| "
                    "%.2f m/s (need >= %.0f%% and >= %.0f m/s); unmasked infeasible %.1f%% (need >= %.0f%%); "
                    "training %.0f s + %.0f s",
                    100.0 * ppo.consistent, ppo.median_v_error, 100.0 * oracle.consistent, oracle.median_v_error,
                    100.0 * kMinConsistent, kMinVelocityError, 100.0 * infeasible, 100.0 * kMinUnmaskedInfeasible,
                    masked.seconds, unmasked.seconds)};
}

// ---- 7 ----
Outcome tracking_loss() {
  const ScenarioConfig& cfg = scenario();
  const Trajectory truth = gen_ground_truth(MotionPattern::straight, cfg.trajectory_length,
                                            derive_seed(kSeed, "track.truth"), cfg.slot_duration);
  const std::uint64_t noise = derive_seed(kSeed, "noise", 1);
  const SpoofPlan perfect = idle_plan(cfg, truth, noise);
  const PolicyNet& policy = ppo_attacker(true).result.policy;
  const auto ppo = tracking_trace(cfg, perfect, attack_plan(cfg, truth, noise, AttackerKind::ppo, &policy));
  const auto oracle = tracking_trace(cfg, perfect, attack_plan(cfg, truth, noise, AttackerKind::oracle, nullptr));
  const auto none = tracking_trace(cfg, perfect, attack_plan(cfg, truth, noise, AttackerKind::none, nullptr));
  const double loss_ppo = relative_rate_loss(ppo, kTrackSegment);
  const double loss_oracle = relative_rate_loss(oracle, kTrackSegment);
  const double loss_none = relative_rate_loss(none, kTrackSegment);
  return {loss_ppo >= kMinRateLoss && loss_none == 0.0,
          fmt("first %d slots: PPO loss %.1f%% (max AoD error %.3f rad), oracle loss %.1f%% (max AoD error %.3f rad), "
              "no attacker %.1f%% (need PPO >= %.0f%%, none = 0)",
              kTrackSegment, 100.0 * loss_ppo, max_aod_error(ppo, kTrackSegment), 100.0 * loss_oracle,
              max_aod_error(oracle, kTrackSegment), 100.0 * loss_none, 100.0 * kMinRateLoss)};
}

// ---- 8 ----
double brute(const Trajectory& s, const stl::Formula& f, int k) {
  std::vector<double> vals;
  switch (f.op) {
    case stl::Op::predicate: {
      const auto& p = s.at(k);
      return f.a[0] * p.x + f.a[1] * p.y + f.a[2] * p.v - f.b;
    }
    case stl::Op::conj:
    case stl::Op::disj:
      for (const auto& c : f.children) vals.push_back(brute(s, c, k));
      break;
    case stl::Op::always:
    case stl::Op::eventually:
      for (int j = k + f.k1; j <= k + f.k2; ++j) vals.push_back(brute(s, f.children[0], j));
      break;
  }
  std::sort(vals.begin(), vals.end());
  return (f.op == stl::Op::disj || f.op == stl::Op::eventually) ? vals.back() : vals.front();
}

stl::Formula random_formula(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> kind(0, depth <= 0 ? 0 : 4);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  switch (kind(rng)) {
    case 1:
    case 2: {
      std::vector<stl::Formula> kids;
      for (int i = std::uniform_int_distribution<int>(2, 3)(rng); i > 0; --i) kids.push_back(random_formula(rng, depth - 1));
      return std::uniform_int_distribution<int>(0, 1)(rng) ? stl::conj(std::move(kids)) : stl::disj(std::move(kids));
    }
    case 3:
    case 4: {
      const int k1 = std::uniform_int_distribution<int>(0, 3)(rng);
      const int k2 = k1 + std::uniform_int_distribution<int>(0, 3)(rng);
      auto child = random_formula(rng, depth - 1);
      return std::uniform_int_distribution<int>(0, 1)(rng) ? stl::always(k1, k2, std::move(child))
                                                          : stl::eventually(k1, k2, std::move(child));
    }
    default: {
      stl::Coeffs a{coef(rng), coef(rng), coef(rng)};
      for (auto& x : a)
        if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) x = 0.0;
      return stl::predicate(a, coef(rng));
    }
  }
}

stl::SmoothNode random_smooth(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.15, 0.85), coef(-1.0, 1.0), win(0.2, 0.8);
  stl::SmoothNode root;
  root.kind = stl::SmoothKind::boolean;
  root.p_kappa = u(rng);
  for (int i = 0; i < 3; ++i) {
    stl::SmoothNode pred;
    pred.a = {coef(rng), coef(rng), coef(rng)};
    pred.b = coef(rng);
    stl::SmoothNode temp;
    temp.kind = stl::SmoothKind::temporal;
    temp.p_rho = u(rng);
    temp.k1 = i + win(rng);
    temp.k2 = temp.k1 + 2.0 + win(rng);
    temp.children.push_back(pred);
    root.children.push_back(temp);
    root.p_w.push_back(u(rng));
  }
  return root;
}

Outcome stl_engine() {
  std::mt19937_64 rng(kSeed);
  std::normal_distribution<double> n3(0.0, 3.0), n1(0.0, 1.0);
  int mismatches = 0, roundtrip_failures = 0;
  for (int i = 0; i < kStlInstances; ++i) {
    const stl::Formula f = random_formula(rng, 3);
    Trajectory t(stl::horizon(f) + 1 + std::uniform_int_distribution<int>(0, 3)(rng));
    for (auto& s : t) s = {n3(rng), n3(rng), n3(rng)};
    const int k = std::uniform_int_distribution<int>(0, static_cast<int>(t.size()) - 1 - stl::horizon(f))(rng);
    mismatches += stl::robustness(t, f, k) != brute(t, f, k);
    roundtrip_failures += !(stl::parse_formula(stl::format_formula(f)) == f);
  }
  double worst_grad = 0.0;
  int grads = 0;
  std::set<int> groups_seen;
  for (int trial = 0; trial < 30; ++trial) {
    const stl::SmoothNode f = random_smooth(rng);
    Trajectory t(10);
    for (auto& s : t) s = {n1(rng), n1(rng), n1(rng)};
    stl::SmoothOptions opt;
    opt.beta = 2.0;
    opt.eta = 0.5;
    const auto res = stl::smooth_robustness(t, f, 0, opt);
    const auto params = stl::flatten(f);
    const auto groups = stl::param_groups(f);
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double h = 1e-6;
      auto plus = params, minus = params;
      plus[i] += h;
      minus[i] -= h;
      stl::SmoothNode fp = f, fm = f;
      stl::unflatten(fp, plus);
      stl::unflatten(fm, minus);
      const double fd =
          (stl::smooth_robustness(t, fp, 0, opt, false).value - stl::smooth_robustness(t, fm, 0, opt, false).value) /
          (2 * h);
      const double scale = std::max({std::abs(fd), std::abs(res.grad[i]), 1e-3});
      worst_grad = std::max(worst_grad, std::abs(fd - res.grad[i]) / scale);
      groups_seen.insert(static_cast<int>(groups[i]));
      ++grads;
    }
  }
  return {mismatches == 0 && roundtrip_failures == 0 && worst_grad <= kGradRelTol && groups_seen.size() == 3,
          fmt("brute-force mismatches %d/%d; round-trip failures %d/%d; %d gradient entries over %zu groups, worst "
              "relative error %.2e (<= %.0e)",
              mismatches, kStlInstances, roundtrip_failures, kStlInstances, grads, groups_seen.size(), worst_grad,
              kGradRelTol)};
}

// ---- 9 / 11 shared ----
struct PipelineRun {
  bool ok = false;
  double seconds = 0.0;
  fs::path dir;
};

fs::path work_root() {
  static const fs::path root = fs::current_path() / "acceptance_work";
  return root;
}

const PipelineRun& pipeline_run(int which) {
  static std::map<int, PipelineRun> runs;
  auto it = runs.find(which);
  if (it != runs.end()) return it->second;
  PipelineRun r;
  r.dir = work_root() / (which == 0 ? "pipeline_a" : "pipeline_b");
  fs::remove_all(r.dir);
  fs::create_directories(r.dir.parent_path());
  const std::string cmd = std::string("\"") + SPOOFSIM_CLI + "\" pipeline --seed " + std::to_string(kSeed) +
                          " --attacker ppo --out \"" + r.dir.string() + "\" > \"" + r.dir.string() + ".log\" 2>&1";
  const auto t0 = Clock::now();
  r.ok = std::system(cmd.c_str()) == 0;
  r.seconds = since(t0);
  return runs.emplace(which, r).first->second;
}

std::map<std::string, int> read_confusion(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  std::map<std::string, int> out;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string name, v;
    std::getline(ss, name, ',');
    for (const char* key : {"tp", "fp", "tn", "fn"}) {
      std::getline(ss, v, ',');
      out[name + "." + key] = std::stoi(v);
    }
  }
  return out;
}

Outcome detection() {
  const PipelineRun& run = pipeline_run(0);
  if (!run.ok) return {false, "pipeline command failed; see " + run.dir.string() + ".log"};
  auto c = read_confusion(run.dir / "confusion.csv");
  auto acc = [&](const std::string& d) {
    const int tp = c[d + ".tp"], tn = c[d + ".tn"];
    const int n = tp + tn + c[d + ".fp"] + c[d + ".fn"];
    return n ? double(tp + tn) / n : 0.0;
  };
  const int n = c["stl.tp"] + c["stl.tn"] + c["stl.fp"] + c["stl.fn"];
  const double stl_acc = acc("stl"), bench = acc("benchmark");
  return {n == 240 && stl_acc >= kMinStlAccuracy && stl_acc - bench >= kMinMargin && run.seconds <= kPipelineSeconds,
          fmt("STL accuracy %.4f (>= %.2f), benchmark %.4f, margin %+.1f pts (>= %.0f) on %d trajectories; STL "
              "tp/fp/tn/fn %d/%d/%d/%d, benchmark %d/%d/%d/%d; %.0f s (<= %.0f s)",
              stl_acc, kMinStlAccuracy, bench, 100.0 * (stl_acc - bench), 100.0 * kMinMargin, n, c["stl.tp"],
              c["stl.fp"], c["stl.tn"], c["stl.fn"], c["benchmark.tp"], c["benchmark.fp"], c["benchmark.tn"],
              c["benchmark.fn"], run.seconds, kPipelineSeconds)};
}

// ---- 10 ----
Outcome dtcr_purity() {
  const ScenarioConfig& cfg = scenario();
  const int n = 3 * kPurityPerPattern;
  std::vector<double> purities;
  double worst_ortho = 0.0;
  int updates = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const GeneratedSet g = generate_dataset(cfg, n, seed, "accept.dtcr", AttackerKind::none);
    const DtcrConfig dc;
    const DtcrResult r = dtcr_train(g.data.samples, dc, seed);
    std::vector<std::array<int, 3>> counts(dc.clusters, {0, 0, 0});
    for (int d = 0; d < n; ++d) counts[r.model.labels[d]][static_cast<int>(g.patterns[d])] += 1;
    int majority = 0;
    for (const auto& c : counts) majority += *std::max_element(c.begin(), c.end());
    purities.push_back(double(majority) / n);
    for (double e : r.trace.orthonormality_error) worst_ortho = std::max(worst_ortho, e);
    updates += static_cast<int>(r.trace.orthonormality_error.size());
  }
  double mean = 0.0;
  for (double p : purities) mean += p;
  mean /= purities.size();
  std::string each;
  for (double p : purities) each += fmt("%s%.3f", each.empty() ? "" : " ", p);
  return {mean >= kMinPurity && worst_ortho <= kMaxOrthoError,
          fmt("purity over seeds 1-5: %s, mean %.3f (>= %.2f); max |F^T F - I| %.1e over %d updates (<= %.0e)",
              each.c_str(), mean, kMinPurity, worst_ortho, updates, kMaxOrthoError)};
}

// ---- 11 ----
std::map<std::string, std::string> csv_files(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file() || e.path().extension() != ".csv") continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    out[fs::relative(e.path(), root).string()] = ss.str();
  }
  return out;
}

Outcome determinism() {
  const PipelineRun& a = pipeline_run(0);
  const PipelineRun& b = pipeline_run(1);
  if (!a.ok || !b.ok) return {false, "pipeline command failed"};
  const auto fa = csv_files(a.dir), fb = csv_files(b.dir);
  int differing = 0;
  for (const auto& [name, body] : fa) {
    auto it = fb.find(name);
    differing += it == fb.end() || it->second != body;
  }
  differing += static_cast<int>(fb.size() > fa.size() ? fb.size() - fa.size() : 0);
  std::string names;
  for (const auto& [name, body] : fa) names += (names.empty() ? "" : " ") + name;
  return {differing == 0 && !fa.empty(),
          fmt("two `pipeline --seed %llu` runs: %zu CSV files (%s), %d differ", static_cast<unsigned long long>(kSeed),
              fa.size(), names.c_str(), differing)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
      {"closed-form matched filter vs time-domain oracle", closed_form_vs_oracle},
      {"feasible-set window versus beam direction", feasible_window},
      {"AoD bias under spoofing", aod_bias},
      {"infeasible-replica dominance and wrapped-peak location", replica_suites},
      {"feasible frequencies win the matched filter", feasible_sign_test},
      {"attack plausibility", attack_plausibility},
      {"beam-tracking rate loss", tracking_loss},
      {"STL engine equivalence, gradients, round-trip", stl_engine},
      {"spoofing detection accuracy and margin", detection},
      {"DTCR purity and indicator orthonormality", dtcr_purity},
      {"pipeline determinism", determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
