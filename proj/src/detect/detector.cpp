// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#include "spoofsim/detect/detector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "spoofsim/stl/parse.hpp"
#include "spoofsim/stl/robustness.hpp"

namespace spoofsim {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using nlohmann::json;

Detection detect(const Trajectory& traj, const DetectorBundle& bundle) {
  const auto [p, dist] = bundle.cluster.nearest(bundle.cluster.encode(traj));
  (void)dist;
  Detection d;
  d.cluster = p;
  d.robustness = stl::robustness(traj, bundle.formulas.at(p), 0);
  d.spoofed = d.robustness < 0.0;
  return d;
}

BenchmarkDetection benchmark_detect(const Trajectory& traj, const ClusterModel& model,
                                    const std::vector<double>& thresholds) {
  const auto [p, dist] = model.nearest(model.encode(traj));
  BenchmarkDetection d;
  d.cluster = p;
  d.distance = dist;
  d.spoofed = dist > thresholds.at(p);
  return d;
}

std::vector<double> calibrate_thresholds(const ClusterModel& model, const std::vector<Trajectory>& data,
                                         double quantile) {
  const int P = model.clusters();
  const MatrixXd H = model.latents(data);
  std::vector<std::vector<double>> dist(P);
  for (Eigen::Index d = 0; d < H.cols(); ++d) {
    const auto [p, r] = model.nearest(H.col(d));
    dist[p].push_back(r);
  }
  std::vector<double> out(P, 0.0);
  for (int p = 0; p < P; ++p) {
    auto& v = dist[p];
    if (v.empty()) continue;
    std::sort(v.begin(), v.end());
    const auto rank = static_cast<std::size_t>(std::ceil(quantile * v.size()));
    out[p] = v[std::clamp<std::size_t>(rank, 1, v.size()) - 1];
  }
  return out;
}

namespace {

static_assert(std::endian::native == std::endian::little, "encoder.bin is written in native little-endian order");

json matrix_json(const MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(r);
  }
  return rows;
}

MatrixXd matrix_from(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows ? static_cast<Eigen::Index>(j[0].size()) : 0;
  MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
  return m;
}

}  // namespace

void save_bundle(const DetectorBundle& b, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path root(dir);
  stl::write_formula_file((root / "formulas.stl").string(), b.formulas);

  json c;
  c["clusters"] = b.cluster.clusters();
  c["latent"] = b.cluster.autoencoder.latent();
  c["scaler"] = {{"mean", b.cluster.scaler.mean}, {"scale", b.cluster.scaler.scale}};
  c["centers"] = matrix_json(b.cluster.centers.transpose());  // one row per cluster
  c["thresholds"] = b.thresholds;
  std::ofstream(root / "clusters.json") << c.dump(2) << "\n";

  const VectorXd& p = b.cluster.autoencoder.params();
  std::ofstream bin(root / "encoder.bin", std::ios::binary);
  bin.write(reinterpret_cast<const char*>(p.data()), static_cast<std::streamsize>(p.size() * sizeof(double)));
  json shape;
  shape["dtype"] = "float64";
  shape["byte_order"] = "little";
  shape["shape"] = {p.size()};
  shape["latent"] = b.cluster.autoencoder.latent();
  shape["layout"] = "gru encoder (input 3), gru decoder (input latent), linear read-out (3 x latent + 3)";
  std::ofstream(root / "encoder.json") << shape.dump(2) << "\n";
}

DetectorBundle load_bundle(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  DetectorBundle b;
  b.formulas = stl::read_formula_file((root / "formulas.stl").string());

  std::ifstream cj(root / "clusters.json");
  if (!cj) throw std::runtime_error("missing clusters.json in " + dir);
  const json c = json::parse(cj);
  b.cluster.scaler.mean = c.at("scaler").at("mean").get<std::array<double, 3>>();
  b.cluster.scaler.scale = c.at("scaler").at("scale").get<std::array<double, 3>>();
  b.cluster.centers = matrix_from(c.at("centers")).transpose();
  b.thresholds = c.at("thresholds").get<std::vector<double>>();

  std::ifstream sj(root / "encoder.json");
  if (!sj) throw std::runtime_error("missing encoder.json in " + dir);
  const json shape = json::parse(sj);
  const auto n = shape.at("shape").at(0).get<Eigen::Index>();
  VectorXd p(n);
  std::ifstream bin(root / "encoder.bin", std::ios::binary);
  bin.read(reinterpret_cast<char*>(p.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (bin.gcount() != static_cast<std::streamsize>(n * sizeof(double)))
    throw std::runtime_error("encoder.bin is shorter than its manifest");
  b.cluster.autoencoder = GruAutoencoder(shape.at("latent").get<int>(), std::move(p));

  const auto P = static_cast<std::size_t>(c.at("clusters").get<int>());
  // A bundle written right after clustering has no formulas yet.
  if ((!b.formulas.empty() && b.formulas.size() != P) || b.thresholds.size() != P ||
      static_cast<std::size_t>(b.cluster.centers.cols()) != P)
    throw std::runtime_error("bundle in " + dir + " does not hold one formula, center and threshold per cluster");
  return b;
}

}  // namespace spoofsim
