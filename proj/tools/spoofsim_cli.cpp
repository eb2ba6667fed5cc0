// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
//
// Command-line front end. Every verb writes CSV/JSON under --out and is deterministic under --seed.
// Exit codes: 0 success, 2 configuration or input error, 3 numerical failure.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spoofsim/attack/trajectory.hpp"
#include "spoofsim/detect/kmeans.hpp"
#include "spoofsim/harness/experiments.hpp"
#include "spoofsim/harness/rate.hpp"
#include "spoofsim/stl/parse.hpp"
#include "spoofsim/stl/robustness.hpp"

namespace fs = std::filesystem;
using namespace spoofsim;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  std::string attacker = "none";
  std::string input;
  std::string bundle;
  std::string policy;
};

ScenarioConfig load_config(const Common& c) {
  ScenarioConfig cfg = c.config.empty() ? default_scenario() : load_scenario(c.config);
  if (c.seed) cfg.rng_seed = *c.seed;
  return cfg;
}

fs::path out_dir(const Common& c) {
  fs::create_directories(c.out);
  return fs::path(c.out);
}

std::string require(const std::string& value, const char* flag) {
  if (value.empty()) throw ConfigError(std::string(flag) + " is required for this command");
  return value;
}

Dataset load_input(const Common& c) {
  const std::string path = require(c.input, "--input");
  if (!fs::exists(path)) throw ConfigError("input file not found: " + path);
  return read_dataset_csv(path);
}

DetectorBundle load_bundle_checked(const std::string& dir) {
  if (!fs::is_directory(dir)) throw ConfigError("bundle directory not found: " + dir);
  try {
    return load_bundle(dir);
  } catch (const stl::StlError&) {
    throw;
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
}

PolicyNet load_policy_checked(const std::string& path) {
  if (!fs::exists(path)) throw ConfigError("policy file not found: " + path);
  return load_policy(path);
}

std::optional<PolicyNet> policy_for(const Common& c, AttackerKind kind) {
  if (kind != AttackerKind::ppo) return std::nullopt;
  return load_policy_checked(require(c.policy, "--policy"));
}

MotionPattern pattern_arg(const std::string& s) {
  try {
    return parse_pattern(s);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::vector<double> arange(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw ConfigError("range needs step > 0 and max >= min");
  std::vector<double> v;
  const auto n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
  for (int i = 0; i <= n; ++i) v.push_back(lo + i * step);
  return v;
}

// ---- verbs ----

struct FeasibleArgs {
  double theta_min = 76.0, theta_max = 86.0, theta_step = 0.5;
};

int cmd_feasible(const Common& c, const FeasibleArgs& a) {
  const ScenarioConfig cfg = load_config(c);
  const auto rows = feasible_sweep(cfg, reference_vehicle(), arange(a.theta_min, a.theta_max, a.theta_step));
  const fs::path path = out_dir(c) / "feasible.csv";
  write_feasible_csv(path.string(), rows);
  std::cout << "wrote " << rows.size() << " rows to " << path.string() << "\n";
  return 0;
}

struct SpoofSlotArgs {
  double theta0 = 85.0;
  double spoof_freq = 800.0;
  double delta_min = 600.0, delta_max = 1000.0, delta_step = 50.0;
  int trials = 200;
};

int cmd_spoof_slot(const Common& c, const SpoofSlotArgs& a) {
  const ScenarioConfig cfg = load_config(c);
  const AttackerKind kind = parse_attacker(c.attacker);
  const VehicleState veh = reference_vehicle();
  const SlotGeometry g = channel_gains(veh, cfg);
  const fs::path root = out_dir(c);
  const double beam = deg2rad(a.theta0);

  const auto grid = frequency_grid(1.0 / cfg.phase_update_interval, 1.0);
  const auto curve = matched_filter_closed(cfg, g, ris_geometry(cfg), beam, a.spoof_freq, grid);
  {
    std::ofstream out(root / "matched_filter.csv");
    out << "freq_hz,magnitude\n";
    for (std::size_t i = 0; i < curve.freqs.size(); ++i)
      out << format_double(curve.freqs[i]) << ',' << format_double(curve.magnitude[i]) << '\n';
  }

  // attacker = none measures the unspoofed estimator at the same beam.
  const bool spoof = kind != AttackerKind::none;
  const auto deltas = spoof ? arange(a.delta_min, a.delta_max, a.delta_step) : std::vector<double>{0.0};
  const auto trials = aod_trials(cfg, veh, a.theta0, deltas, a.trials, cfg.rng_seed, spoof);
  {
    std::ofstream out(root / "aod_trials.csv");
    out << "delta_hz,trial,aod_deg\n";
    for (const auto& t : trials)
      out << format_double(t.delta_hz) << ',' << t.trial << ',' << format_double(t.aod_deg) << '\n';
  }
  const double truth = rad2deg(g.aod);
  std::cout << "matched-filter peak " << curve.peak_freq << " Hz; true AoD " << truth << " deg; mean |bias| "
            << mean_abs_bias(trials, truth) << " deg (signed " << mean_signed_bias(trials, truth) << ")\n";
  return 0;
}

struct PlanArgs {
  int episodes = 600;
  bool unmasked = false;
  std::string pattern = "straight";
};

void write_plan_csv(const fs::path& path, const SpoofPlan& plan) {
  std::ofstream out(path);
  out << "k,true_x,true_y,true_v,sensed_x,sensed_y,sensed_v,action_hz,feasible,consistent,reward\n";
  for (const auto& s : plan.steps) {
    const auto& r = s.result;
    out << s.k << ',' << format_double(s.truth.x) << ',' << format_double(s.truth.y) << ','
        << format_double(s.truth.v) << ',' << format_double(r.sensed.x) << ',' << format_double(r.sensed.y) << ','
        << format_double(r.sensed.v) << ',' << (r.action ? format_double(*r.action) : std::string("")) << ','
        << (r.feasible ? 1 : 0) << ',' << (is_consistent(r.consistency) ? 1 : 0) << ',' << format_double(r.reward)
        << '\n';
  }
}

int cmd_plan_attack(const Common& c, const PlanArgs& a) {
  const ScenarioConfig cfg = load_config(c);
  AttackerKind kind = parse_attacker(c.attacker);
  if (kind == AttackerKind::none) kind = AttackerKind::ppo;  // planning an attack implies an attacker
  const fs::path root = out_dir(c);
  std::optional<PolicyNet> policy;
  if (kind == AttackerKind::ppo) {
    if (!c.policy.empty()) {
      policy = load_policy_checked(c.policy);
    } else {
      PpoConfig hp;
      hp.episodes = a.episodes;
      hp.masked = !a.unmasked;
      hp.trajectory_length = cfg.trajectory_length;
      const PpoResult res = ppo_train(cfg, hp, derive_seed(cfg.rng_seed, "ppo"));
      std::ofstream out(root / "reward_curve.csv");
      out << "episode,mean_reward,effective_reward,infeasible_fraction,consistent_fraction\n";
      for (std::size_t i = 0; i < res.stats.mean_reward.size(); ++i)
        out << i << ',' << format_double(res.stats.mean_reward[i]) << ','
            << format_double(res.stats.effective_reward[i]) << ',' << format_double(res.stats.infeasible_fraction[i])
            << ',' << format_double(res.stats.consistent_fraction[i]) << '\n';
      save_policy(res.policy, (root / "policy.json").string());
      policy = res.policy;
    }
  }
  const Trajectory truth = gen_ground_truth(pattern_arg(a.pattern), cfg.trajectory_length,
                                            derive_seed(cfg.rng_seed, "plan.truth"), cfg.slot_duration);
  const std::uint64_t noise = derive_seed(cfg.rng_seed, "noise", 0);
  SpoofPlan plan = kind == AttackerKind::ppo ? policy_plan(cfg, *policy, truth, noise, !a.unmasked)
                                             : attack_plan(cfg, truth, noise, kind, nullptr);
  write_plan_csv(root / "plan.csv", plan);
  std::cout << "mean reward " << plan.mean_reward() << ", consistent " << plan.consistent_fraction() << "\n";
  return 0;
}

struct TrackArgs {
  std::string pattern = "straight";
  int segment = 25;
};

int cmd_track(const Common& c, const TrackArgs& a) {
  const ScenarioConfig cfg = load_config(c);
  const AttackerKind kind = parse_attacker(c.attacker);
  const auto policy = policy_for(c, kind);
  const Trajectory truth = gen_ground_truth(pattern_arg(a.pattern), cfg.trajectory_length,
                                            derive_seed(cfg.rng_seed, "track.truth"), cfg.slot_duration);
  const std::uint64_t noise = derive_seed(cfg.rng_seed, "noise", 1);
  const SpoofPlan perfect = idle_plan(cfg, truth, noise);
  const SpoofPlan spoofed = attack_plan(cfg, truth, noise, kind, policy ? &*policy : nullptr);
  const auto trace = tracking_trace(cfg, perfect, spoofed);
  const fs::path root = out_dir(c);
  std::ofstream out(root / "tracking.csv");
  out << "k,true_aod_rad,aod_perfect_rad,aod_spoofed_rad,beam_perfect_rad,beam_spoofed_rad,rate_perfect,rate_spoofed\n";
  for (const auto& s : trace)
    out << s.k << ',' << format_double(s.true_aod) << ',' << format_double(s.aod_perfect) << ','
        << format_double(s.aod_spoofed) << ',' << format_double(s.beam_perfect) << ','
        << format_double(s.beam_spoofed) << ',' << format_double(s.rate_perfect) << ','
        << format_double(s.rate_spoofed) << '\n';
  std::cout << "relative rate loss over first " << a.segment << " slots: " << relative_rate_loss(trace, a.segment)
            << "; max AoD error " << max_aod_error(trace, a.segment) << " rad\n";
  return 0;
}

struct GenArgs {
  int count = 480;
};

int cmd_gen_data(const Common& c, const GenArgs& a) {
  const ScenarioConfig cfg = load_config(c);
  const AttackerKind kind = parse_attacker(c.attacker);
  const auto policy = policy_for(c, kind);
  if (a.count < 1) throw ConfigError("--count must be >= 1");
  const GeneratedSet g =
      generate_dataset(cfg, a.count, cfg.rng_seed, "datagen", kind, policy ? &*policy : nullptr);
  const fs::path root = out_dir(c);
  write_dataset_csv((root / "data.csv").string(), g.data);
  write_manifest((root / "data.manifest.json").string(), g.manifest);
  std::cout << "wrote " << a.count << " trajectories to " << (root / "data.csv").string() << "\n";
  return 0;
}

struct ClusterArgs {
  int clusters = 6;
  int iterations = 50;
};

int cmd_cluster(const Common& c, const ClusterArgs& a) {
  const ScenarioConfig cfg = load_config(c);
  const Dataset data = load_input(c);
  DtcrConfig dc;
  dc.clusters = a.clusters;
  dc.iterations = a.iterations;
  const DtcrResult res = dtcr_train(data.samples, dc, cfg.rng_seed);
  const fs::path root = out_dir(c);
  DetectorBundle b;
  b.cluster = res.model;
  b.thresholds = calibrate_thresholds(b.cluster, data.samples);
  save_bundle(b, (root / "bundle").string());
  {
    std::ofstream out(root / "assignments.csv");
    out << "sample_id,cluster\n";
    for (std::size_t i = 0; i < res.model.labels.size(); ++i) out << i << ',' << res.model.labels[i] << '\n';
  }
  {
    std::ofstream out(root / "dtcr_trace.csv");
    out << "iteration,joint_loss\n";
    for (std::size_t i = 0; i < res.trace.joint.size(); ++i)
      out << i + 1 << ',' << format_double(res.trace.joint[i]) << '\n';
  }
  double worst = 0.0;
  for (double e : res.trace.orthonormality_error) worst = std::max(worst, e);
  std::cout << "clustered " << data.size() << " trajectories into " << a.clusters
            << " groups; max indicator orthonormality error " << worst << "\n";
  return 0;
}

struct LearnArgs {
  int epochs = 300;
};

int cmd_learn_stl(const Common& c, const LearnArgs& a) {
  const ScenarioConfig cfg = load_config(c);
  const Dataset data = load_input(c);
  DetectorBundle b = load_bundle_checked(require(c.bundle, "--bundle"));
  const int P = b.cluster.clusters();
  std::vector<int> assignment(data.size());
  for (std::size_t i = 0; i < data.size(); ++i)
    assignment[i] = b.cluster.nearest(b.cluster.encode(data.samples[i])).first;
  b.formulas = learn_formulas(data.samples, assignment, P, a.epochs, cfg.rng_seed);
  const fs::path root = out_dir(c);
  save_bundle(b, (root / "bundle").string());
  std::ofstream out(root / "stl_fit.csv");
  out << "cluster,members,misclassification,formula\n";
  for (int p = 0; p < P; ++p) {
    std::vector<bool> in(data.size());
    int members = 0;
    for (std::size_t i = 0; i < data.size(); ++i) members += (in[i] = assignment[i] == p);
    out << p << ',' << members << ',' << format_double(stl::misclassification_rate(data.samples, in, b.formulas[p]))
        << ",\"" << stl::format_formula(b.formulas[p]) << "\"\n";
    std::cout << "phi_" << p << ": " << stl::format_formula(b.formulas[p]) << "\n";
  }
  return 0;
}

void write_detections(const fs::path& path, const Dataset& data, const DetectorBundle& b, ConfusionMatrix* stl_cm,
                      ConfusionMatrix* bench_cm) {
  const int n = static_cast<int>(data.size());
  std::vector<Detection> det(n);
  std::vector<BenchmarkDetection> bench(n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    det[i] = detect(data.samples[i], b);
    bench[i] = benchmark_detect(data.samples[i], b.cluster, b.thresholds);
  }
  std::ofstream out(path);
  out << "sample_id," << (data.labeled() ? "label," : "")
      << "stl_spoofed,cluster,robustness,benchmark_spoofed,distance\n";
  for (int i = 0; i < n; ++i) {
    out << i << ',';
    if (data.labeled()) out << data.labels[i] << ',';
    out << (det[i].spoofed ? 1 : 0) << ',' << det[i].cluster << ',' << format_double(det[i].robustness) << ','
        << (bench[i].spoofed ? 1 : 0) << ',' << format_double(bench[i].distance) << '\n';
    if (stl_cm) stl_cm->add(data.labels[i] == 1, !det[i].spoofed);
    if (bench_cm) bench_cm->add(data.labels[i] == 1, !bench[i].spoofed);
  }
}

DetectorBundle bundle_with_formulas(const Common& c) {
  DetectorBundle b = load_bundle_checked(require(c.bundle, "--bundle"));
  if (b.formulas.empty()) throw ConfigError("bundle " + c.bundle + " has no formulas; run learn-stl first");
  return b;
}

int cmd_detect(const Common& c) {
  const Dataset data = load_input(c);
  const DetectorBundle b = bundle_with_formulas(c);
  const fs::path path = out_dir(c) / "detections.csv";
  write_detections(path, data, b, nullptr, nullptr);
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

void print_confusion(const char* name, const ConfusionMatrix& m) {
  std::cout << name << ": tp " << m.tp << " fp " << m.fp << " tn " << m.tn << " fn " << m.fn << " accuracy "
            << m.accuracy() << "\n";
}

int cmd_eval(const Common& c) {
  const Dataset data = load_input(c);
  if (!data.labeled()) throw ConfigError("eval needs a labeled dataset");
  const DetectorBundle b = bundle_with_formulas(c);
  const fs::path root = out_dir(c);
  ConfusionMatrix s, bm;
  write_detections(root / "detections.csv", data, b, &s, &bm);
  write_confusion_csv((root / "confusion.csv").string(), s, bm);
  print_confusion("stl", s);
  print_confusion("benchmark", bm);
  return 0;
}

struct PipelineArgs {
  int train = 480;
  int test = 120;
  int ppo_episodes = 600;
  int dtcr_iterations = 50;
  int tlinet_epochs = 300;
};

int cmd_pipeline(const Common& c, const PipelineArgs& a) {
  const ScenarioConfig cfg = load_config(c);
  PipelineOptions o;
  o.train_count = a.train;
  o.test_clean = a.test;
  o.test_spoofed = a.test;
  o.attacker = parse_attacker(c.attacker);
  o.ppo.episodes = a.ppo_episodes;
  o.ppo.trajectory_length = cfg.trajectory_length;
  o.dtcr.iterations = a.dtcr_iterations;
  o.tlinet_epochs = a.tlinet_epochs;
  o.out_dir = out_dir(c).string();
  const PipelineResult r = run_pipeline(cfg, cfg.rng_seed, o);
  nlohmann::json m;
  m["seed"] = cfg.rng_seed;
  m["attacker"] = to_string(o.attacker);
  m["stl_accuracy"] = r.stl.accuracy();
  m["benchmark_accuracy"] = r.benchmark.accuracy();
  m["test_size"] = r.stl.total();
  std::ofstream(fs::path(o.out_dir) / "metrics.json") << m.dump(2) << "\n";
  print_confusion("stl", r.stl);
  print_confusion("benchmark", r.benchmark);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS Doppler-spoofing simulator and STL-based spoofing detector"};
  app.require_subcommand(1);
  app.fallthrough();

  Common c;
  app.add_option("--config", c.config, "scenario YAML file (defaults apply when omitted)");
  app.add_option("--seed", c.seed, "root seed; overrides simulation.seed");
  app.add_option("--out", c.out, "output directory")->capture_default_str();
  app.add_option("--attacker", c.attacker, "none, ppo or oracle")->capture_default_str();
  app.add_option("--input", c.input, "trajectory CSV");
  app.add_option("--bundle", c.bundle, "detector bundle directory");
  app.add_option("--policy", c.policy, "trained policy JSON");
  // A repeated flag overrides the earlier one, so scripts can append overrides.
  for (auto* opt : app.get_options()) opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  FeasibleArgs fa;
  auto* feasible = app.add_subcommand("feasible-set", "feasible spoofing frequencies versus beam direction");
  feasible->add_option("--theta-min", fa.theta_min, "deg")->capture_default_str();
  feasible->add_option("--theta-max", fa.theta_max, "deg")->capture_default_str();
  feasible->add_option("--theta-step", fa.theta_step, "deg")->capture_default_str();

  SpoofSlotArgs sa;
  auto* slot = app.add_subcommand("spoof-slot", "single-slot matched filter and AoD estimation bias");
  slot->add_option("--theta0", sa.theta0, "beam direction, deg")->capture_default_str();
  slot->add_option("--spoof-freq", sa.spoof_freq, "Hz, for the matched-filter curve")->capture_default_str();
  slot->add_option("--delta-min", sa.delta_min, "Hz")->capture_default_str();
  slot->add_option("--delta-max", sa.delta_max, "Hz")->capture_default_str();
  slot->add_option("--delta-step", sa.delta_step, "Hz")->capture_default_str();
  slot->add_option("--trials", sa.trials, "noise trials per frequency")->capture_default_str();

  PlanArgs pa;
  auto* plan = app.add_subcommand("plan-attack", "train the PPO attacker (or run the oracle) and record a plan");
  plan->add_option("--episodes", pa.episodes)->capture_default_str();
  plan->add_flag("--unmasked", pa.unmasked, "train without the feasibility mask");
  plan->add_option("--pattern", pa.pattern, "straight, single_lane_change or double_lane_change")
      ->capture_default_str();

  TrackArgs ta;
  auto* track = app.add_subcommand("track", "beam tracking with and without the attack");
  track->add_option("--pattern", ta.pattern)->capture_default_str();
  track->add_option("--segment", ta.segment, "slots in the rate-loss window")->capture_default_str();

  GenArgs ga;
  auto* gen = app.add_subcommand("gen-data", "generate sensed trajectories");
  gen->add_option("--count", ga.count)->capture_default_str();

  ClusterArgs ca;
  auto* cluster = app.add_subcommand("cluster", "cluster normal trajectories and write a bundle without formulas");
  cluster->add_option("--clusters", ca.clusters)->capture_default_str();
  cluster->add_option("--iterations", ca.iterations)->capture_default_str();

  LearnArgs la;
  auto* learn = app.add_subcommand("learn-stl", "learn one STL formula per cluster of --bundle");
  learn->add_option("--epochs", la.epochs)->capture_default_str();

  auto* det = app.add_subcommand("detect", "flag spoofed trajectories in --input");
  auto* eval = app.add_subcommand("eval", "confusion matrices on a labeled --input");

  PipelineArgs pla;
  auto* pipe = app.add_subcommand("pipeline", "end-to-end: data, clustering, formulas, attack, detection");
  pipe->add_option("--train-count", pla.train)->capture_default_str();
  pipe->add_option("--test-count", pla.test, "clean and spoofed test trajectories each")->capture_default_str();
  pipe->add_option("--ppo-episodes", pla.ppo_episodes)->capture_default_str();
  pipe->add_option("--dtcr-iterations", pla.dtcr_iterations)->capture_default_str();
  pipe->add_option("--tlinet-epochs", pla.tlinet_epochs)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*feasible) return cmd_feasible(c, fa);
    if (*slot) return cmd_spoof_slot(c, sa);
    if (*plan) return cmd_plan_attack(c, pa);
    if (*track) return cmd_track(c, ta);
    if (*gen) return cmd_gen_data(c, ga);
    if (*cluster) return cmd_cluster(c, ca);
    if (*learn) return cmd_learn_stl(c, la);
    if (*det) return cmd_detect(c);
    if (*eval) return cmd_eval(c);
    if (*pipe) return cmd_pipeline(c, pla);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DatasetError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const stl::ParseError& e) {
    std::cerr << "formula error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
