// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "spoofsim/geometry.hpp"

namespace spoofsim {

// Trajectories plus an optional per-sample label (1 = normal, 0 = spoofed by default).
struct Dataset {
  std::vector<Trajectory> samples;
  std::vector<int> labels;  // empty or one per sample

  bool labeled() const { return !labels.empty(); }
  std::size_t size() const { return samples.size(); }
};

struct DatasetManifest {
  std::uint64_t seed = 0;
  std::string kind;                        // "clean", "spoofed", "mixed"
  std::map<std::string, int> pattern_mix;  // generator pattern -> count
  std::string scenario_hash;
  std::string attacker = "none";
  int count = 0;
  int length = 0;
};

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// CSV columns sample_id,k,x,y,v[,label]; numbers use the shortest exact decimal form.
void write_dataset_csv(const std::string& path, const Dataset& data);
Dataset read_dataset_csv(const std::string& path);

void write_manifest(const std::string& path, const DatasetManifest& m);
DatasetManifest read_manifest(const std::string& path);

// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace spoofsim
