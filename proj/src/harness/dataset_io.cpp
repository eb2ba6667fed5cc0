// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#include "spoofsim/harness/dataset_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace spoofsim {

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

void write_dataset_csv(const std::string& path, const Dataset& data) {
  if (data.labeled() && data.labels.size() != data.samples.size())
    throw DatasetError("label count does not match sample count");
  std::ofstream out(path);
  if (!out) throw DatasetError("cannot write " + path);
  out << "sample_id,k,x,y,v" << (data.labeled() ? ",label" : "") << "\n";
  for (std::size_t i = 0; i < data.samples.size(); ++i) {
    const auto& t = data.samples[i];
    for (std::size_t k = 0; k < t.size(); ++k) {
      out << i << ',' << k << ',' << format_double(t[k].x) << ',' << format_double(t[k].y) << ','
          << format_double(t[k].v);
      if (data.labeled()) out << ',' << data.labels[i];
      out << '\n';
    }
  }
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string c;
  while (std::getline(ss, c, ',')) cells.push_back(c);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

template <typename T>
T parse_cell(const std::string& s, const std::string& where) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw DatasetError(where + ": cannot parse '" + s + "'");
  return v;
}

}  // namespace

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw DatasetError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  bool labeled = false;
  if (line == "sample_id,k,x,y,v,label") {
    labeled = true;
  } else if (line != "sample_id,k,x,y,v") {
    throw DatasetError(path + ": expected header sample_id,k,x,y,v[,label], got '" + line + "'");
  }
  Dataset d;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    const auto cells = split(line);
    if (cells.size() != (labeled ? 6u : 5u)) throw DatasetError(where + ": wrong number of columns");
    const auto id = parse_cell<std::size_t>(cells[0], where);
    const auto k = parse_cell<std::size_t>(cells[1], where);
    VehicleState s{parse_cell<double>(cells[2], where), parse_cell<double>(cells[3], where),
                   parse_cell<double>(cells[4], where)};
    if (!std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(s.v))
      throw DatasetError(where + ": non-finite state");
    if (id == d.samples.size()) {
      d.samples.emplace_back();
      if (labeled) d.labels.push_back(parse_cell<int>(cells[5], where));
    } else if (id + 1 != d.samples.size()) {
      throw DatasetError(where + ": sample ids must be contiguous and ordered");
    }
    if (k != d.samples.back().size()) throw DatasetError(where + ": slot index out of order");
    if (labeled && parse_cell<int>(cells[5], where) != d.labels.back())
      throw DatasetError(where + ": label changes within a sample");
    d.samples.back().push_back(s);
  }
  return d;
}

void write_manifest(const std::string& path, const DatasetManifest& m) {
  nlohmann::json j;
  j["seed"] = m.seed;
  j["kind"] = m.kind;
  j["pattern_mix"] = m.pattern_mix;
  j["scenario_hash"] = m.scenario_hash;
  j["attacker"] = m.attacker;
  j["count"] = m.count;
  j["length"] = m.length;
  std::ofstream out(path);
  if (!out) throw DatasetError("cannot write " + path);
  out << j.dump(2) << "\n";
}

DatasetManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open " + path);
  const auto j = nlohmann::json::parse(in);
  DatasetManifest m;
  m.seed = j.at("seed").get<std::uint64_t>();
  m.kind = j.at("kind").get<std::string>();
  m.pattern_mix = j.at("pattern_mix").get<std::map<std::string, int>>();
  m.scenario_hash = j.at("scenario_hash").get<std::string>();
  m.attacker = j.value("attacker", "none");
  m.count = j.at("count").get<int>();
  m.length = j.at("length").get<int>();
  return m;
}

}  // namespace spoofsim
