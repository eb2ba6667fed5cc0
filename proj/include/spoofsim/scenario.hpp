// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace spoofsim {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

// Kinematic limits for slot-to-slot plausibility.
struct ConsistencyParams {
  double a_max = 3.0;   // m/s^2
  double a_min = -3.0;  // m/s^2
  double delta_x = 1.0; // m
  double delta_y = 0.3; // m
};

enum class PositionConvention { half_delay, literal };

// Physical constants and simulation knobs, SI units throughout.
struct ScenarioConfig {
  double transmit_power = 1.0;      // W
  double noise_power = 1e-13;       // W
  double carrier_freq = 28e9;       // Hz
  double wavelength = kSpeedOfLight / 28e9;
  int n_tx = 32;
  int n_rx = 32;
  double slot_duration = 10e-3;          // T
  double phase_update_interval = 1e-3;   // ΔT
  int n_phase_updates = 10;              // N_sub
  Vec2 ris_position{5.0, 15.0};
  int ris_elements = 32;
  double ris_efficiency = 0.8;
  double ris_area = 0.05;           // m^2
  double ris_max_delay = 0.32e-6;   // s
  double vehicle_rcs = 5.011872336272722;  // m^2 (7 dBsm)
  std::uint64_t rng_seed = 1;

  ConsistencyParams consistency;
  double threshold_margin = 10.0;
  int action_count = 200;
  int trajectory_length = 67;
  PositionConvention position_convention = PositionConvention::half_delay;

  double array_gain() const;       // γ_B = sqrt(N_t N_r)
  double ris_rcs() const;          // κ_R = 4πηS²/λ²
  double noise_variance() const;   // per-element variance of the compensated echo noise
  double max_phase_rate() const { return 1.0 / phase_update_interval; }
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws ConfigError when an invariant is broken.
void validate(const ScenarioConfig& cfg);

ScenarioConfig default_scenario();

// YAML with nested sections; angles in degrees, powers in dBm, RCS in dBsm.
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const std::string& text, const std::string& origin = "<string>");
std::string dump_scenario(const ScenarioConfig& cfg);

// FNV-1a over the canonical dump of every physical parameter.
std::string scenario_hash(const ScenarioConfig& cfg);

double dbm_to_watts(double dbm);
double dbsm_to_m2(double dbsm);
double deg2rad(double deg);
double rad2deg(double rad);

}  // namespace spoofsim
