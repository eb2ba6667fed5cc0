// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
// Every OpenMP kernel against its serial reference, and training results independent of thread count.
#include <omp.h>

#include "doctest.h"
#include "spoofsim/aod.hpp"
#include "spoofsim/attack/trajectory.hpp"
#include "spoofsim/detect/dtcr.hpp"
#include "spoofsim/detect/tlinet.hpp"
#include "spoofsim/stl/robustness.hpp"

using namespace spoofsim;

namespace {

struct ThreadScope {
  explicit ThreadScope(int n) : saved(omp_get_max_threads()) { omp_set_num_threads(n); }
  ~ThreadScope() { omp_set_num_threads(saved); }
  int saved;
};

std::vector<Trajectory> truth_set(int n, int K) {
  std::vector<Trajectory> out;
  for (int i = 0; i < n; ++i)
    out.push_back(gen_ground_truth(static_cast<MotionPattern>(i % 3), K, derive_seed(17, "par", i)));
  return out;
}

}  // namespace

TEST_CASE("echo oracle: serial equals parallel") {
  const ScenarioConfig cfg = default_scenario();
  const SlotGeometry veh = channel_gains(VehicleState{3.0, 21.0, 10.0}, cfg);
  const auto grid = frequency_grid(1000.0, 50.0);
  ThreadScope t(4);
  const auto a = echo_synth_oracle(cfg, veh, ris_geometry(cfg), deg2rad(85.0), 700.0, grid, 2000, Exec::serial);
  const auto b = echo_synth_oracle(cfg, veh, ris_geometry(cfg), deg2rad(85.0), 700.0, grid, 2000, Exec::parallel);
  CHECK(a.magnitude == b.magnitude);
}

TEST_CASE("AoD grid search: serial equals parallel") {
  const ScenarioConfig cfg = default_scenario();
  const SlotGeometry veh = channel_gains(VehicleState{3.0, 21.0, 10.0}, cfg);
  ThreadScope t(4);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    EchoOptions o;
    o.noise_seed = seed;
    const CVec y = compensated_echo(cfg, veh, ris_geometry(cfg), deg2rad(85.0), 650.0, o);
    const double a = aod_mle(y, cfg, veh.gain, deg2rad(85.0), MleMode::spoofed, angle_grid(0.1), Exec::serial);
    const double b = aod_mle(y, cfg, veh.gain, deg2rad(85.0), MleMode::spoofed, angle_grid(0.1), Exec::parallel);
    CHECK(a == b);
  }
}

TEST_CASE("autoencoder latents: serial equals parallel") {
  const auto data = truth_set(12, 15);
  DtcrConfig cfg;
  cfg.clusters = 3;
  cfg.latent = 5;
  cfg.iterations = 1;
  const ClusterModel m = dtcr_train(data, cfg, 1).model;
  ThreadScope t(4);
  CHECK(m.latents(data, Exec::serial) == m.latents(data, Exec::parallel));
}

TEST_CASE("DTCR and TLINet results do not depend on the thread count") {
  const auto data = truth_set(15, 15);
  DtcrConfig dc;
  dc.clusters = 3;
  dc.latent = 5;
  dc.iterations = 3;
  dc.indicator_every = 1;
  std::vector<bool> in(data.size());
  for (std::size_t i = 0; i < in.size(); ++i) in[i] = i % 3 == 0;
  TlinetConfig tc;
  tc.epochs = 20;

  DtcrResult d1, d4;
  TlinetResult t1, t4;
  {
    ThreadScope t(1);
    d1 = dtcr_train(data, dc, 2);
    t1 = tlinet_train(data, in, tc, 2);
  }
  {
    ThreadScope t(4);
    d4 = dtcr_train(data, dc, 2);
    t4 = tlinet_train(data, in, tc, 2);
  }
  CHECK(d1.model.autoencoder.params() == d4.model.autoencoder.params());
  CHECK(d1.model.labels == d4.model.labels);
  CHECK(t1.formula == t4.formula);
  CHECK(t1.loss_history == t4.loss_history);
}

TEST_CASE("batch robustness: serial equals parallel") {
  const auto data = truth_set(30, 20);
  const stl::Formula f = stl::always(2, 10, stl::predicate({0.0, 1.0, 0.1}, 22.0));
  ThreadScope t(4);
  CHECK(stl::batch_robustness(data, f, Exec::serial) == stl::batch_robustness(data, f, Exec::parallel));
}
