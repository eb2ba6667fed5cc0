// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#include "spoofsim/harness/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

#include "json.hpp"
#include "spoofsim/attack/trajectory.hpp"
#include "spoofsim/stl/parse.hpp"

namespace spoofsim {

AttackerKind parse_attacker(const std::string& s) {
  if (s == "none") return AttackerKind::none;
  if (s == "ppo") return AttackerKind::ppo;
  if (s == "oracle") return AttackerKind::oracle;
  throw ConfigError("attacker must be none, ppo or oracle, got '" + s + "'");
}

std::string to_string(AttackerKind k) {
  switch (k) {
    case AttackerKind::none: return "none";
    case AttackerKind::ppo: return "ppo";
    case AttackerKind::oracle: return "oracle";
  }
  return "none";
}

VehicleState reference_vehicle() { return {3.0, 21.0, 10.0}; }

std::vector<FeasibleRow> feasible_sweep(const ScenarioConfig& cfg, const VehicleState& veh,
                                        const std::vector<double>& theta0_deg) {
  const SlotGeometry g = channel_gains(veh, cfg);
  const SlotGeometry ris = ris_geometry(cfg);
  const auto grid = action_grid(cfg);
  std::vector<FeasibleRow> rows;
  rows.reserve(theta0_deg.size() * grid.size());
  for (double th : theta0_deg) {
    const FeasibleSet fs = feasible_set(cfg, g, ris, deg2rad(th), grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      FeasibleRow r;
      r.theta0_deg = th;
      r.freq_hz = grid[i];
      r.lhs = fs.lhs_values[i];
      r.feasible = fs.mask[i];
      r.spoofed_velocity = grid[i] * kSpeedOfLight / (cfg.carrier_freq * std::cos(g.aod));
      rows.push_back(r);
    }
  }
  return rows;
}

void write_feasible_csv(const std::string& path, const std::vector<FeasibleRow>& rows) {
  std::ofstream out(path);
  if (!out) throw DatasetError("cannot write " + path);
  out << "theta0_deg,freq_hz,lhs,feasible,spoofed_velocity_mps\n";
  for (const auto& r : rows)
    out << format_double(r.theta0_deg) << ',' << format_double(r.freq_hz) << ',' << format_double(r.lhs) << ','
        << (r.feasible ? 1 : 0) << ',' << format_double(r.spoofed_velocity) << '\n';
}

std::vector<AodTrial> aod_trials(const ScenarioConfig& cfg, const VehicleState& veh, double theta0_deg,
                                 const std::vector<double>& deltas_hz, int trials, std::uint64_t seed, bool spoof,
                                 Exec exec) {
  const SlotGeometry g = channel_gains(veh, cfg);
  const SlotGeometry ris = ris_geometry(cfg);
  const double beam = deg2rad(theta0_deg);
  const auto grid = angle_grid(0.1);
  const int nd = static_cast<int>(deltas_hz.size());
  std::vector<AodTrial> out(static_cast<std::size_t>(nd) * trials);
  auto one = [&](int idx) {
    const int di = idx / trials;
    const int t = idx % trials;
    const std::uint64_t ns = derive_seed(seed, "aod.trial", static_cast<std::uint64_t>(idx));
    CVec y;
    if (spoof) {
      EchoOptions o;
      o.noise_seed = ns;
      y = compensated_echo(cfg, g, ris, beam, deltas_hz[di], o);
    } else {
      y = perfect_echo(cfg, g, beam, ns);
    }
    const double th = aod_mle(y, cfg, g.gain, beam, spoof ? MleMode::spoofed : MleMode::perfect, grid);
    out[idx] = {deltas_hz[di], t, rad2deg(th)};
  };
  const int total = nd * trials;
  if (exec == Exec::serial) {
    for (int i = 0; i < total; ++i) one(i);
  } else {
#pragma omp parallel for schedule(dynamic, 4)
    for (int i = 0; i < total; ++i) one(i);
  }
  return out;
}

namespace {
std::map<double, double> per_delta_means(const std::vector<AodTrial>& trials) {
  std::map<double, std::pair<double, int>> acc;
  for (const auto& t : trials) {
    acc[t.delta_hz].first += t.aod_deg;
    acc[t.delta_hz].second += 1;
  }
  std::map<double, double> out;
  for (const auto& [d, s] : acc) out[d] = s.first / s.second;
  return out;
}
}  // namespace

double mean_abs_bias(const std::vector<AodTrial>& trials, double true_aod_deg) {
  const auto means = per_delta_means(trials);
  if (means.empty()) return 0.0;
  double s = 0.0;
  for (const auto& [d, m] : means) s += std::abs(m - true_aod_deg);
  return s / means.size();
}

double mean_signed_bias(const std::vector<AodTrial>& trials, double true_aod_deg) {
  const auto means = per_delta_means(trials);
  if (means.empty()) return 0.0;
  double s = 0.0;
  for (const auto& [d, m] : means) s += m - true_aod_deg;
  return s / means.size();
}

SpoofPlan idle_plan(const ScenarioConfig& cfg, const Trajectory& truth, std::uint64_t noise_root) {
  SpoofEpisode ep(cfg, truth, noise_root);
  SpoofPlan plan;
  plan.initial = ep.state().prev_sensed;
  while (!ep.done()) {
    PlanStep s;
    s.k = ep.slot();
    s.truth = truth[ep.slot()];
    s.result = ep.step(std::nullopt);
    plan.steps.push_back(s);
  }
  return plan;
}

SpoofPlan attack_plan(const ScenarioConfig& cfg, const Trajectory& truth, std::uint64_t noise_root,
                      AttackerKind kind, const PolicyNet* policy) {
  switch (kind) {
    case AttackerKind::none: return idle_plan(cfg, truth, noise_root);
    case AttackerKind::oracle: return oracle_plan(cfg, truth, noise_root);
    case AttackerKind::ppo:
      if (!policy) throw std::invalid_argument("PPO attacker needs a trained policy");
      return policy_plan(cfg, *policy, truth, noise_root);
  }
  return idle_plan(cfg, truth, noise_root);
}

GeneratedSet generate_dataset(const ScenarioConfig& cfg, int count, std::uint64_t seed, const std::string& stream,
                              AttackerKind attacker, const PolicyNet* policy) {
  GeneratedSet g;
  g.data.samples.resize(count);
  g.data.labels.assign(count, attacker == AttackerKind::none ? 1 : 0);
  g.patterns.resize(count);
  for (int i = 0; i < count; ++i) g.patterns[i] = static_cast<MotionPattern>(i % 3);
  const int K = cfg.trajectory_length;
  std::string error;
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < count; ++i) {
    try {
      const auto idx = static_cast<std::uint64_t>(i);
      const Trajectory truth =
          gen_ground_truth(g.patterns[i], K, derive_seed(seed, stream + ".truth", idx), cfg.slot_duration);
      const SpoofPlan plan = attack_plan(cfg, truth, derive_seed(seed, stream + ".noise", idx), attacker, policy);
      g.data.samples[i] = plan.sensed_trajectory();
    } catch (const std::exception& e) {
#pragma omp critical
      if (error.empty()) error = e.what();
    }
  }
  if (!error.empty()) throw NumericalError("dataset generation failed: " + error);
  g.manifest.seed = seed;
  g.manifest.kind = attacker == AttackerKind::none ? "clean" : "spoofed";
  g.manifest.attacker = to_string(attacker);
  for (auto p : g.patterns) g.manifest.pattern_mix[to_string(p)] += 1;
  g.manifest.scenario_hash = scenario_hash(cfg);
  g.manifest.count = count;
  g.manifest.length = K;
  return g;
}

void ConfusionMatrix::add(bool actual_normal, bool predicted_normal) {
  if (actual_normal) {
    (predicted_normal ? tp : fn) += 1;
  } else {
    (predicted_normal ? fp : tn) += 1;
  }
}

double ConfusionMatrix::accuracy() const {
  const int n = total();
  return n ? static_cast<double>(tp + tn) / n : 0.0;
}

std::vector<stl::Formula> learn_formulas(const std::vector<Trajectory>& data, const std::vector<int>& assignment,
                                         int clusters, int epochs, std::uint64_t seed) {
  std::vector<stl::Formula> out;
  for (int p = 0; p < clusters; ++p) {
    std::vector<bool> in_class(data.size());
    for (std::size_t d = 0; d < data.size(); ++d) in_class[d] = assignment[d] == p;
    TlinetConfig tc = tlinet_class_defaults(p);
    tc.epochs = epochs;
    out.push_back(tlinet_train(data, in_class, tc, derive_seed(seed, "tlinet", static_cast<std::uint64_t>(p))).formula);
  }
  return out;
}

void write_confusion_csv(const std::string& path, const ConfusionMatrix& stl, const ConfusionMatrix& bench) {
  std::ofstream out(path);
  if (!out) throw DatasetError("cannot write " + path);
  out << "detector,tp,fp,tn,fn,accuracy\n";
  auto row = [&](const char* name, const ConfusionMatrix& c) {
    out << name << ',' << c.tp << ',' << c.fp << ',' << c.tn << ',' << c.fn << ',' << format_double(c.accuracy())
        << '\n';
  };
  row("stl", stl);
  row("benchmark", bench);
}

PipelineResult run_pipeline(const ScenarioConfig& cfg, std::uint64_t seed, const PipelineOptions& opt) {
  namespace fs = std::filesystem;
  const bool write = !opt.out_dir.empty();
  const fs::path root(opt.out_dir);
  if (write) fs::create_directories(root);

  auto stage = [](const char* name, auto&& fn) {
    try {
      return fn();
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw NumericalError(std::string(name) + ": " + e.what());
    }
  };

  GeneratedSet train = stage("datagen", [&] {
    return generate_dataset(cfg, opt.train_count, seed, "datagen.train", AttackerKind::none);
  });
  if (write) {
    write_dataset_csv((root / "train.csv").string(), train.data);
    write_manifest((root / "train.manifest.json").string(), train.manifest);
  }

  const DtcrResult clustering = stage("cluster", [&] { return dtcr_train(train.data.samples, opt.dtcr, seed); });
  PipelineResult res;
  res.bundle.cluster = clustering.model;
  res.bundle.formulas = stage("learn-stl", [&] {
    return learn_formulas(train.data.samples, clustering.model.labels, opt.dtcr.clusters, opt.tlinet_epochs, seed);
  });
  res.bundle.thresholds = calibrate_thresholds(res.bundle.cluster, train.data.samples);
  if (write) save_bundle(res.bundle, (root / "bundle").string());

  PolicyNet policy;
  const PolicyNet* policy_ptr = nullptr;
  if (opt.attacker == AttackerKind::ppo) {
    PpoResult trained = stage("plan-attack", [&] { return ppo_train(cfg, opt.ppo, derive_seed(seed, "ppo")); });
    policy = trained.policy;
    policy_ptr = &policy;
    if (write) save_policy(policy, (root / "policy.json").string());
  }

  GeneratedSet clean = stage("datagen", [&] {
    return generate_dataset(cfg, opt.test_clean, seed, "datagen.test_clean", AttackerKind::none);
  });
  GeneratedSet spoofed = stage("datagen", [&] {
    return generate_dataset(cfg, opt.test_spoofed, seed, "datagen.test_spoofed", opt.attacker, policy_ptr);
  });
  Dataset test;
  for (const auto* part : {&clean, &spoofed}) {
    test.samples.insert(test.samples.end(), part->data.samples.begin(), part->data.samples.end());
    test.labels.insert(test.labels.end(), part->data.labels.begin(), part->data.labels.end());
  }
  res.test_labels = test.labels;
  if (write) {
    write_dataset_csv((root / "test.csv").string(), test);
    DatasetManifest m = clean.manifest;
    m.kind = "mixed";
    m.attacker = to_string(opt.attacker);
    m.count = static_cast<int>(test.size());
    m.pattern_mix.clear();
    for (const auto* part : {&clean, &spoofed})
      for (const auto& [k, v] : part->manifest.pattern_mix) m.pattern_mix[k] += v;
    write_manifest((root / "test.manifest.json").string(), m);
  }

  const int n = static_cast<int>(test.size());
  res.detections.resize(n);
  res.benchmark_detections.resize(n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    res.detections[i] = detect(test.samples[i], res.bundle);
    res.benchmark_detections[i] = benchmark_detect(test.samples[i], res.bundle.cluster, res.bundle.thresholds);
  }
  for (int i = 0; i < n; ++i) {
    const bool normal = test.labels[i] == 1;
    res.stl.add(normal, !res.detections[i].spoofed);
    res.benchmark.add(normal, !res.benchmark_detections[i].spoofed);
  }

  if (write) {
    std::ofstream out(root / "detections.csv");
    out << "sample_id,label,stl_spoofed,cluster,robustness,benchmark_spoofed,distance\n";
    for (int i = 0; i < n; ++i) {
      const auto& d = res.detections[i];
      const auto& b = res.benchmark_detections[i];
      out << i << ',' << test.labels[i] << ',' << (d.spoofed ? 1 : 0) << ',' << d.cluster << ','
          << format_double(d.robustness) << ',' << (b.spoofed ? 1 : 0) << ',' << format_double(b.distance) << '\n';
    }
    write_confusion_csv((root / "confusion.csv").string(), res.stl, res.benchmark);
  }
  return res;
}

}  // namespace spoofsim
