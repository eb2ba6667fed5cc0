// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#include "spoofsim/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace spoofsim {

double ScenarioConfig::array_gain() const { return std::sqrt(double(n_tx) * double(n_rx)); }

double ScenarioConfig::ris_rcs() const {
  return 4.0 * kPi * ris_efficiency * ris_area * ris_area / (wavelength * wavelength);
}

double ScenarioConfig::noise_variance() const {
  const double g = array_gain();
  return noise_power * slot_duration / (transmit_power * g * g);
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double dbsm_to_m2(double dbsm) { return std::pow(10.0, dbsm / 10.0); }
double deg2rad(double deg) { return deg * kPi / 180.0; }
double rad2deg(double rad) { return rad * 180.0 / kPi; }

void validate(const ScenarioConfig& c) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(name) + " must be positive");
  };
  positive(c.transmit_power, "rsu.transmit_power_dbm");
  positive(c.noise_power, "rsu.noise_power_dbm");
  positive(c.carrier_freq, "rsu.carrier_freq_hz");
  positive(c.wavelength, "wavelength");
  positive(c.slot_duration, "timing.slot_duration_s");
  positive(c.phase_update_interval, "timing.phase_update_interval_s");
  positive(c.ris_efficiency, "ris.efficiency");
  positive(c.ris_area, "ris.area_m2");
  positive(c.ris_max_delay, "ris.max_delay_s");
  positive(c.vehicle_rcs, "vehicle.rcs_dbsm");
  if (c.n_tx < 1 || c.n_rx < 1) throw ConfigError("rsu.n_tx and rsu.n_rx must be >= 1");
  if (c.ris_elements < 0) throw ConfigError("ris.elements must be >= 0");
  if (c.n_phase_updates < 1) throw ConfigError("timing.n_phase_updates must be >= 1");
  if (c.ris_efficiency > 1.0) throw ConfigError("ris.efficiency must lie in (0, 1]");
  const double t = c.n_phase_updates * c.phase_update_interval;
  if (std::abs(t - c.slot_duration) > 1e-12 * c.slot_duration)
    throw ConfigError("timing: slot_duration_s must equal n_phase_updates * phase_update_interval_s");
  if (std::abs(c.wavelength * c.carrier_freq - kSpeedOfLight) > 1e-9 * kSpeedOfLight)
    throw ConfigError("wavelength inconsistent with carrier frequency");
  if (c.ris_efficiency <= 0.0) throw ConfigError("ris.efficiency must lie in (0, 1]");
  if (!(c.consistency.a_min < c.consistency.a_max))
    throw ConfigError("consistency.a_min must be below consistency.a_max");
  if (!(c.consistency.delta_x > 0.0) || !(c.consistency.delta_y > 0.0))
    throw ConfigError("consistency.delta_x and delta_y must be positive");
  if (!(c.threshold_margin > 0.0)) throw ConfigError("simulation.threshold_margin must be positive");
  if (c.action_count < 1) throw ConfigError("simulation.action_count must be >= 1");
  if (c.trajectory_length < 2) throw ConfigError("simulation.trajectory_length must be >= 2");
}

ScenarioConfig default_scenario() {
  ScenarioConfig c;
  c.transmit_power = dbm_to_watts(30.0);
  c.noise_power = dbm_to_watts(-100.0);
  c.vehicle_rcs = dbsm_to_m2(7.0);
  c.wavelength = kSpeedOfLight / c.carrier_freq;
  return c;
}

namespace {

std::string where(const YAML::Node& n, const std::string& origin) {
  std::ostringstream os;
  os << origin << ":" << (n.Mark().line + 1) << ":" << (n.Mark().column + 1);
  return os.str();
}

class Reader {
 public:
  Reader(YAML::Node root, std::string origin) : root_(std::move(root)), origin_(std::move(origin)) {}

  template <typename T>
  void get(const char* section, const char* key, T& out) {
    seen_[section].insert(key);
    YAML::Node sec = root_[section];
    if (!sec) return;
    if (!sec.IsMap()) throw ConfigError(where(sec, origin_) + ": section '" + section + "' must be a mapping");
    YAML::Node v = sec[key];
    if (!v) return;
    try {
      out = v.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError(where(v, origin_) + ": field '" + section + "." + key + "' has the wrong type");
    }
  }

  void check_unknown() const {
    for (auto it = root_.begin(); it != root_.end(); ++it) {
      const std::string sec = it->first.as<std::string>();
      auto found = seen_.find(sec);
      if (found == seen_.end())
        throw ConfigError(where(it->first, origin_) + ": unknown section '" + sec + "'");
      if (!it->second.IsMap()) continue;
      for (auto jt = it->second.begin(); jt != it->second.end(); ++jt) {
        const std::string key = jt->first.as<std::string>();
        if (!found->second.count(key))
          throw ConfigError(where(jt->first, origin_) + ": unknown field '" + sec + "." + key + "'");
      }
    }
  }

 private:
  YAML::Node root_;
  std::string origin_;
  std::map<std::string, std::set<std::string>> seen_;
};

}  // namespace

ScenarioConfig parse_scenario(const std::string& text, const std::string& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    std::ostringstream os;
    os << origin << ":" << (e.mark.line + 1) << ":" << (e.mark.column + 1) << ": " << e.msg;
    throw ConfigError(os.str());
  }
  ScenarioConfig c = default_scenario();
  if (root.IsNull()) return c;
  if (!root.IsMap()) throw ConfigError(origin + ": top level must be a mapping of sections");

  Reader r(root, origin);
  double p_dbm = 30.0, n_dbm = -100.0, rcs_dbsm = 7.0;
  r.get("rsu", "transmit_power_dbm", p_dbm);
  r.get("rsu", "noise_power_dbm", n_dbm);
  r.get("rsu", "carrier_freq_hz", c.carrier_freq);
  r.get("rsu", "n_tx", c.n_tx);
  r.get("rsu", "n_rx", c.n_rx);
  r.get("timing", "slot_duration_s", c.slot_duration);
  r.get("timing", "phase_update_interval_s", c.phase_update_interval);
  r.get("timing", "n_phase_updates", c.n_phase_updates);
  std::vector<double> ris_pos{c.ris_position.x, c.ris_position.y};
  r.get("ris", "position_m", ris_pos);
  r.get("ris", "elements", c.ris_elements);
  r.get("ris", "efficiency", c.ris_efficiency);
  r.get("ris", "area_m2", c.ris_area);
  r.get("ris", "max_delay_s", c.ris_max_delay);
  r.get("vehicle", "rcs_dbsm", rcs_dbsm);
  r.get("consistency", "a_max", c.consistency.a_max);
  r.get("consistency", "a_min", c.consistency.a_min);
  r.get("consistency", "delta_x", c.consistency.delta_x);
  r.get("consistency", "delta_y", c.consistency.delta_y);
  std::string convention = "half_delay";
  long long seed = static_cast<long long>(c.rng_seed);
  r.get("simulation", "seed", seed);
  r.get("simulation", "threshold_margin", c.threshold_margin);
  r.get("simulation", "action_count", c.action_count);
  r.get("simulation", "trajectory_length", c.trajectory_length);
  r.get("simulation", "position_convention", convention);
  r.check_unknown();

  if (ris_pos.size() != 2) throw ConfigError(origin + ": ris.position_m must be a 2-element list");
  c.ris_position = {ris_pos[0], ris_pos[1]};
  c.transmit_power = dbm_to_watts(p_dbm);
  c.noise_power = dbm_to_watts(n_dbm);
  c.vehicle_rcs = dbsm_to_m2(rcs_dbsm);
  c.wavelength = kSpeedOfLight / c.carrier_freq;
  if (seed < 0) throw ConfigError(origin + ": simulation.seed must be non-negative");
  c.rng_seed = static_cast<std::uint64_t>(seed);
  if (convention == "half_delay") {
    c.position_convention = PositionConvention::half_delay;
  } else if (convention == "literal") {
    c.position_convention = PositionConvention::literal;
  } else {
    throw ConfigError(origin + ": simulation.position_convention must be half_delay or literal");
  }
  validate(c);
  return c;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path);
}

std::string dump_scenario(const ScenarioConfig& c) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "rsu:\n"
     << "  transmit_power_dbm: " << 10.0 * std::log10(c.transmit_power) + 30.0 << "\n"
     << "  noise_power_dbm: " << 10.0 * std::log10(c.noise_power) + 30.0 << "\n"
     << "  carrier_freq_hz: " << c.carrier_freq << "\n"
     << "  n_tx: " << c.n_tx << "\n"
     << "  n_rx: " << c.n_rx << "\n"
     << "timing:\n"
     << "  slot_duration_s: " << c.slot_duration << "\n"
     << "  phase_update_interval_s: " << c.phase_update_interval << "\n"
     << "  n_phase_updates: " << c.n_phase_updates << "\n"
     << "ris:\n"
     << "  position_m: [" << c.ris_position.x << ", " << c.ris_position.y << "]\n"
     << "  elements: " << c.ris_elements << "\n"
     << "  efficiency: " << c.ris_efficiency << "\n"
     << "  area_m2: " << c.ris_area << "\n"
     << "  max_delay_s: " << c.ris_max_delay << "\n"
     << "vehicle:\n"
     << "  rcs_dbsm: " << 10.0 * std::log10(c.vehicle_rcs) << "\n"
     << "consistency:\n"
     << "  a_max: " << c.consistency.a_max << "\n"
     << "  a_min: " << c.consistency.a_min << "\n"
     << "  delta_x: " << c.consistency.delta_x << "\n"
     << "  delta_y: " << c.consistency.delta_y << "\n"
     << "simulation:\n"
     << "  seed: " << c.rng_seed << "\n"
     << "  threshold_margin: " << c.threshold_margin << "\n"
     << "  action_count: " << c.action_count << "\n"
     << "  trajectory_length: " << c.trajectory_length << "\n"
     << "  position_convention: "
     << (c.position_convention == PositionConvention::half_delay ? "half_delay" : "literal") << "\n";
  return os.str();
}

std::string scenario_hash(const ScenarioConfig& c) {
  // The seed is a simulation knob, not a physical parameter.
  ScenarioConfig physical = c;
  physical.rng_seed = 0;
  const std::string text = dump_scenario(physical);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace spoofsim
