// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
//
// Serial reference vs OpenMP version of each parallel kernel.
// Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include <random>

#include "spoofsim/aod.hpp"
#include "spoofsim/echo.hpp"
#include "spoofsim/harness/experiments.hpp"
#include "spoofsim/matched_filter.hpp"
#include "spoofsim/stl/parse.hpp"
#include "spoofsim/stl/robustness.hpp"

using namespace spoofsim;

namespace {

Exec mode(const benchmark::State& st) { return st.range(0) ? Exec::parallel : Exec::serial; }

struct Slot {
  ScenarioConfig cfg = default_scenario();
  SlotGeometry veh = channel_gains(reference_vehicle(), cfg);
  SlotGeometry ris = ris_geometry(cfg);
  double beam = deg2rad(85.0);
};

void BM_MatchedFilterGrid(benchmark::State& st) {
  const Slot s;
  const auto grid = frequency_grid(1.0 / s.cfg.phase_update_interval, 1.0);
  for (auto _ : st)
    benchmark::DoNotOptimize(
        matched_filter_closed(s.cfg, s.veh, s.ris, s.beam, 700.0, grid, FilterForm::exact, mode(st)));
}
BENCHMARK(BM_MatchedFilterGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_EchoOracle(benchmark::State& st) {
  const Slot s;
  const auto grid = frequency_grid(1.0 / s.cfg.phase_update_interval, 10.0);
  for (auto _ : st)
    benchmark::DoNotOptimize(echo_synth_oracle(s.cfg, s.veh, s.ris, s.beam, 700.0, grid, 10000, mode(st)));
}
BENCHMARK(BM_EchoOracle)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_AodGridSearch(benchmark::State& st) {
  const Slot s;
  EchoOptions opt;
  opt.noise_seed = 1;
  const CVec y = compensated_echo(s.cfg, s.veh, s.ris, s.beam, 700.0, opt);
  const auto grid = angle_grid(0.1);
  for (auto _ : st)
    benchmark::DoNotOptimize(aod_mle(y, s.cfg, s.veh.gain, s.beam, MleMode::spoofed, grid, mode(st)));
}
BENCHMARK(BM_AodGridSearch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_AodTrials(benchmark::State& st) {
  const Slot s;
  for (auto _ : st)
    benchmark::DoNotOptimize(aod_trials(s.cfg, reference_vehicle(), 85.0, {600.0, 800.0}, 20, 1, true, mode(st)));
}
BENCHMARK(BM_AodTrials)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_BatchRobustness(benchmark::State& st) {
  const stl::Formula f = stl::parse_formula("G[0,20](y - 20 > 0) & F[10,40](v - 5 > 0 | x + 3 > 0)");
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(10.0, 5.0);
  std::vector<Trajectory> data(2000, Trajectory(67));
  for (auto& t : data)
    for (auto& p : t) p = {n(rng), n(rng), n(rng)};
  for (auto _ : st) benchmark::DoNotOptimize(stl::batch_robustness(data, f, mode(st)));
}
BENCHMARK(BM_BatchRobustness)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
