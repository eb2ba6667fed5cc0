// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#include "spoofsim/matched_filter.hpp"

#include <cmath>
#include <stdexcept>

namespace spoofsim {

std::vector<double> frequency_grid(double upper, double step) {
  if (!(step > 0.0) || !(upper > 0.0)) throw std::invalid_argument("frequency_grid: non-positive bound");
  const long n = std::lround(std::floor(upper / step + 1e-9));
  std::vector<double> g(n);
  for (long i = 0; i < n; ++i) g[i] = (i + 1) * step;
  return g;
}

namespace {

void fill_peak(MatchedFilterCurve& c) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < c.magnitude.size(); ++i)
    if (c.magnitude[i] > c.magnitude[best]) best = i;
  c.peak_freq = c.freqs.empty() ? 0.0 : c.freqs[best];
}

}  // namespace

double matched_filter_at(const ScenarioConfig& cfg, const SlotGeometry& veh, const SlotGeometry& ris,
                         double beam, double spoof_freq, double mu, FilterForm form) {
  const double T = cfg.slot_duration;
  const double dT = cfg.phase_update_interval;
  const int N = cfg.n_phase_updates;
  const double M = cfg.ris_elements;
  const double g2 = cfg.array_gain() * cfg.array_gain();
  const double pre = cfg.transmit_power * T * T * g2;

  const double sv = sinc(T * (mu - veh.doppler));
  const double sr = sinc(mu * dT) * dirichlet(N, kPi * dT * (mu - spoof_freq));
  if (form == FilterForm::approx) {
    const double fv = dirichlet(cfg.n_tx, kPi / 2.0 * (std::cos(beam) - std::cos(veh.aod)));
    const double fr = dirichlet(cfg.n_tx, kPi / 2.0 * (std::cos(beam) - std::cos(ris.aod)));
    const double cv = std::norm(veh.gain) * fv * fv;
    const double cr = std::norm(ris.gain) * fr * fr;
    return pre * (cv * sv * sv + M * M * cr * sr * sr);
  }
  const cd ev = veh.gain * std::polar(sv, -kPi * (mu - veh.doppler) * T);
  const cd er = ris.gain * M * std::polar(1.0, kPi * spoof_freq * dT) *
                std::polar(sr, -kPi * (mu - spoof_freq) * T);
  double acc = 0.0;
  for (int nr = 1; nr <= cfg.n_rx; ++nr) {
    const cd term = ev * rx_tx_factor(beam, veh.aod, nr, cfg.n_tx) + er * rx_tx_factor(beam, ris.aod, nr, cfg.n_tx);
    acc += std::norm(term);
  }
  return pre * acc / cfg.n_rx;
}

MatchedFilterCurve matched_filter_closed(const ScenarioConfig& cfg, const SlotGeometry& veh,
                                         const SlotGeometry& ris, double beam, double spoof_freq,
                                         const std::vector<double>& grid, FilterForm form, Exec exec) {
  if (grid.empty()) throw std::invalid_argument("matched_filter_closed: empty grid");
  MatchedFilterCurve c;
  c.freqs = grid;
  c.magnitude.assign(grid.size(), 0.0);
  const long n = static_cast<long>(grid.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i)
      c.magnitude[i] = matched_filter_at(cfg, veh, ris, beam, spoof_freq, grid[i], form);
  } else {
    for (long i = 0; i < n; ++i)
      c.magnitude[i] = matched_filter_at(cfg, veh, ris, beam, spoof_freq, grid[i], form);
  }
  fill_peak(c);
  return c;
}

MatchedFilterCurve echo_synth_oracle(const ScenarioConfig& cfg, const SlotGeometry& veh,
                                     const SlotGeometry& ris, double beam, double spoof_freq,
                                     const std::vector<double>& grid, int n_samples, Exec exec) {
  if (grid.empty()) throw std::invalid_argument("echo_synth_oracle: empty grid");
  if (n_samples < 10 * cfg.n_phase_updates)
    throw std::invalid_argument("echo_synth_oracle: n_samples must be at least 10 * N_sub");
  const int nr = cfg.n_rx;
  const int M = cfg.ris_elements;
  const double T = cfg.slot_duration;
  const double dT = cfg.phase_update_interval;
  const double dt = T / n_samples;
  const double amp = std::sqrt(cfg.transmit_power) * cfg.array_gain();

  // Transmit beam w = a(beam); the array factors come from explicit inner products.
  const auto w = steering(beam, cfg.n_tx);
  const auto a_v = steering(veh.aod, cfg.n_tx);
  const auto a_r = steering(ris.aod, cfg.n_tx);
  cd tx_v{0.0, 0.0}, tx_r{0.0, 0.0};
  for (int i = 0; i < cfg.n_tx; ++i) {
    tx_v += std::conj(a_v[i]) * w[i];
    tx_r += std::conj(a_r[i]) * w[i];
  }
  const auto b_v = steering(veh.aod, nr, ArraySide::rx);
  const auto b_r = steering(ris.aod, nr, ArraySide::rx);

  // RIS element phase profile toward the RSU (unit modulus); identical phase law on every element.
  std::vector<cd> ris_in(M), ris_out(M);
  const double c_b = std::cos(ris.aod + kPi);
  for (int m = 0; m < M; ++m) {
    ris_in[m] = std::polar(1.0, -kPi * m * c_b);
    ris_out[m] = std::polar(1.0, -kPi * m * c_b);
  }

  std::vector<cd> y(static_cast<std::size_t>(n_samples) * nr);
  for (int s = 0; s < n_samples; ++s) {
    const double t = (s + 0.5) * dt;
    const cd vehicle = veh.gain * std::polar(1.0, 2.0 * kPi * veh.doppler * t) * tx_v;
    const double phi = 2.0 * kPi * spoof_freq * std::ceil(t / dT) * dT;
    cd surface{0.0, 0.0};
    for (int m = 0; m < M; ++m) surface += std::conj(ris_out[m]) * std::polar(1.0, phi) * ris_in[m];
    const cd reflected = ris.gain * surface * tx_r;
    for (int n = 0; n < nr; ++n) y[static_cast<std::size_t>(s) * nr + n] = amp * (vehicle * b_v[n] + reflected * b_r[n]);
  }

  MatchedFilterCurve c;
  c.freqs = grid;
  c.magnitude.assign(grid.size(), 0.0);
  auto eval = [&](double mu) {
    std::vector<cd> acc(nr, cd{0.0, 0.0});
    for (int s = 0; s < n_samples; ++s) {
      const double t = (s + 0.5) * dt;
      const cd ph = std::polar(1.0, -2.0 * kPi * mu * t);
      const cd* row = &y[static_cast<std::size_t>(s) * nr];
      for (int n = 0; n < nr; ++n) acc[n] += row[n] * ph;
    }
    double total = 0.0;
    for (int n = 0; n < nr; ++n) total += std::norm(acc[n] * dt);
    return total;
  };
  const long n = static_cast<long>(grid.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (long i = 0; i < n; ++i) c.magnitude[i] = eval(grid[i]);
  } else {
    for (long i = 0; i < n; ++i) c.magnitude[i] = eval(grid[i]);
  }
  fill_peak(c);
  return c;
}

}  // namespace spoofsim
