// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spoofsim/attack/ppo.hpp"
#include "spoofsim/detect/detector.hpp"
#include "spoofsim/detect/tlinet.hpp"
#include "spoofsim/harness/dataset_io.hpp"

namespace spoofsim {

enum class AttackerKind { none, ppo, oracle };
AttackerKind parse_attacker(const std::string& s);
std::string to_string(AttackerKind k);

// Vehicle used by the single-slot experiments: (3, 21) m at 10 m/s.
VehicleState reference_vehicle();

// ---- single-slot analysis ----

struct FeasibleRow {
  double theta0_deg = 0.0;
  double freq_hz = 0.0;
  double lhs = 0.0;
  bool feasible = false;
  double spoofed_velocity = 0.0;  // m/s the RSU would report for this Doppler
};

std::vector<FeasibleRow> feasible_sweep(const ScenarioConfig& cfg, const VehicleState& veh,
                                        const std::vector<double>& theta0_deg);
void write_feasible_csv(const std::string& path, const std::vector<FeasibleRow>& rows);

struct AodTrial {
  double delta_hz = 0.0;
  int trial = 0;
  double aod_deg = 0.0;
};

// Monte Carlo angle estimates for each spoofing frequency (or, with spoof = false, the clean echo).
std::vector<AodTrial> aod_trials(const ScenarioConfig& cfg, const VehicleState& veh, double theta0_deg,
                                 const std::vector<double>& deltas_hz, int trials, std::uint64_t seed, bool spoof,
                                 Exec exec = Exec::parallel);
// Per-frequency mean estimate, then the average of |mean - true| over frequencies (degrees).
double mean_abs_bias(const std::vector<AodTrial>& trials, double true_aod_deg);
// Same but signed (mean - true).
double mean_signed_bias(const std::vector<AodTrial>& trials, double true_aod_deg);

// ---- trajectory runs ----

SpoofPlan idle_plan(const ScenarioConfig& cfg, const Trajectory& truth, std::uint64_t noise_root);
SpoofPlan attack_plan(const ScenarioConfig& cfg, const Trajectory& truth, std::uint64_t noise_root,
                      AttackerKind kind, const PolicyNet* policy);

struct GeneratedSet {
  Dataset data;
  std::vector<MotionPattern> patterns;
  DatasetManifest manifest;
};

// `count` sensed trajectories with patterns cycling straight / single / double; label 1 when clean,
// 0 when attacked. Sample i uses sub-streams derived from (seed, stream, i).
GeneratedSet generate_dataset(const ScenarioConfig& cfg, int count, std::uint64_t seed, const std::string& stream,
                              AttackerKind attacker, const PolicyNet* policy = nullptr);

// ---- detection metrics ----

// Positive class = normal trajectory.
struct ConfusionMatrix {
  int tp = 0, fp = 0, tn = 0, fn = 0;
  void add(bool actual_normal, bool predicted_normal);
  int total() const { return tp + fp + tn + fn; }
  double accuracy() const;
};

// ---- end-to-end ----

struct PipelineOptions {
  int train_count = 480;
  int test_clean = 120;
  int test_spoofed = 120;
  AttackerKind attacker = AttackerKind::ppo;
  PpoConfig ppo;
  DtcrConfig dtcr;
  int tlinet_epochs = 300;
  std::string out_dir;  // empty = keep everything in memory
};

struct PipelineResult {
  DetectorBundle bundle;
  ConfusionMatrix stl;
  ConfusionMatrix benchmark;
  std::vector<int> test_labels;
  std::vector<Detection> detections;
  std::vector<BenchmarkDetection> benchmark_detections;
};

PipelineResult run_pipeline(const ScenarioConfig& cfg, std::uint64_t seed, const PipelineOptions& opt);

// Trains one formula per cluster from a clustered dataset (labels = cluster assignment).
std::vector<stl::Formula> learn_formulas(const std::vector<Trajectory>& data, const std::vector<int>& assignment,
                                         int clusters, int epochs, std::uint64_t seed);

void write_confusion_csv(const std::string& path, const ConfusionMatrix& stl, const ConfusionMatrix& bench);

}  // namespace spoofsim
