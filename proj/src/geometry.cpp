// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#include "spoofsim/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace spoofsim {

std::vector<cd> steering(double theta, int n, ArraySide) {
  std::vector<cd> a(n);
  const double scale = 1.0 / std::sqrt(double(n));
  const double c = std::cos(theta);
  for (int i = 0; i < n; ++i) a[i] = std::polar(scale, -kPi * i * c);
  return a;
}

cd path_gain(double distance, double rcs, double wavelength) {
  const double mag = std::sqrt(wavelength * wavelength * rcs /
                               (64.0 * kPi * kPi * kPi * std::pow(distance, 4)));
  // Reduce the phase modulo 2 pi before the trig call to keep precision at large d / lambda.
  const double cycles = 2.0 * distance / wavelength;
  const double frac = cycles - std::floor(cycles);
  return std::polar(mag, 2.0 * kPi * frac);
}

double doppler_of(double v, double theta, const ScenarioConfig& cfg) {
  return v * cfg.carrier_freq * std::cos(theta) / kSpeedOfLight;
}

SlotGeometry channel_gains(const VehicleState& s, const ScenarioConfig& cfg) {
  const double d = std::hypot(s.x, s.y);
  if (!(d > 0.0)) throw std::invalid_argument("channel_gains: position at the array origin");
  SlotGeometry g;
  g.distance = d;
  g.aod = std::atan2(s.y, s.x);
  g.delay = 2.0 * d / kSpeedOfLight;
  g.doppler = doppler_of(s.v, g.aod, cfg);
  g.gain = path_gain(d, cfg.vehicle_rcs, cfg.wavelength);
  return g;
}

SlotGeometry ris_geometry(const ScenarioConfig& cfg) {
  const double d = std::hypot(cfg.ris_position.x, cfg.ris_position.y);
  if (!(d > 0.0)) throw std::invalid_argument("ris_geometry: RIS at the array origin");
  SlotGeometry g;
  g.distance = d;
  g.aod = std::atan2(cfg.ris_position.y, cfg.ris_position.x);
  g.delay = 2.0 * d / kSpeedOfLight;
  g.doppler = 0.0;
  g.gain = path_gain(d, cfg.ris_rcs(), cfg.wavelength);
  return g;
}

}  // namespace spoofsim
