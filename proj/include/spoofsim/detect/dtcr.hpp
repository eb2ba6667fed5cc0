// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "spoofsim/detect/gru_autoencoder.hpp"
#include "spoofsim/matched_filter.hpp"

namespace spoofsim {

struct DtcrConfig {
  int clusters = 6;         // P
  int latent = 16;          // m
  int iterations = 50;      // i_max
  int passes_per_iteration = 4;  // data passes per network update round
  int indicator_every = 5;  // i_T
  double lambda0 = 50.0;
  double learning_rate = 0.01;
  int batch_size = 16;
  int kmeans_restarts = 10;
  // Unit-normalize F's rows before K-means, as in normalized spectral clustering.
  bool normalize_rows = false;
};

struct ClusterModel {
  FeatureScaler scaler;
  GruAutoencoder autoencoder;
  Eigen::MatrixXd indicator;  // F, D x P
  Eigen::MatrixXd centers;    // m x P, latent means of each cluster's members
  std::vector<int> labels;    // training assignments

  int clusters() const { return static_cast<int>(centers.cols()); }
  Eigen::VectorXd encode(const Trajectory& t) const;
  Eigen::MatrixXd latents(const std::vector<Trajectory>& data, Exec exec = Exec::parallel) const;  // m x D
  // Nearest center and its distance.
  std::pair<int, double> nearest(const Eigen::VectorXd& h) const;
};

struct IndicatorUpdate {
  Eigen::MatrixXd F;
  bool rank_deficient = false;  // fewer than P non-zero singular values; completion is arbitrary
};

// Top-P eigenvectors of H^T H (right singular vectors of H), columns with a fixed sign.
IndicatorUpdate indicator_update(const Eigen::MatrixXd& H, int P);

struct DtcrLosses {
  double reconstruction = 0.0;  // mean over samples of the summed squared error (scaled units)
  double cluster = 0.0;         // Tr(H^T H) - Tr(F^T H^T H F)
  double joint = 0.0;           // reconstruction + lambda0 * cluster / D
};

DtcrLosses dtcr_losses(const std::vector<Trajectory>& batch, const ClusterModel& model, double lambda0);

struct DtcrTrace {
  std::vector<double> joint;                   // after every iteration
  std::vector<double> orthonormality_error;    // max |F^T F - I| after every indicator update
  std::vector<double> joint_before_update;     // around each indicator update, nets fixed
  std::vector<double> joint_after_update;
  bool rank_deficient = false;
  double kmeans_inertia = 0.0;
};

struct DtcrResult {
  ClusterModel model;
  std::vector<std::vector<bool>> pseudo_labels;  // per cluster p: in-class flags over the dataset
  DtcrTrace trace;
};

DtcrResult dtcr_train(const std::vector<Trajectory>& data, const DtcrConfig& cfg, std::uint64_t seed);

}  // namespace spoofsim
