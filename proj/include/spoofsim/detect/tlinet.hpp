// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#pragma once

#include <cstdint>
#include <vector>

#include "spoofsim/detect/gru_autoencoder.hpp"
#include "spoofsim/stl/smooth.hpp"

namespace spoofsim {

struct TlinetConfig {
  int units = 4;            // predicate/temporal units feeding the Boolean unit
  double beta = 10.0;       // softmax temperature during training
  double eta = 1.0;         // soft window slope
  double learning_rate = 0.05;
  int epochs = 300;
  double lambda_sparse = 0.02;     // lambda_1, weight on sum |a|
  double lambda_select = 5.0;      // lambda_2, weight on sum p_w (1 - p_w)
  double lambda_operator = 5.0;    // lambda_3, weight on p_kappa (1 - p_kappa) + sum p_rho (1 - p_rho)
  // Labels enter the task loss as +1/-1; false keeps the literal 1/0 variant.
  bool signed_labels = true;
  // Average the task loss within each class before combining, so a 1-in-6 class is not
  // outvoted by its complement.
  bool balance_classes = true;
};

// Per-class defaults for the six-cluster setting (lambda_1, lambda_2, lambda_3).
TlinetConfig tlinet_class_defaults(int class_index);

struct TlinetModel {
  FeatureScaler scaler;       // predicates act on scaled features during training
  stl::SmoothNode network;    // Boolean unit over temporal units over predicates
  double eta = 1.0;

  // Discrete formula over raw (x, y, v) with the same robustness values as the scaled network.
  stl::Formula extract() const;
};

TlinetModel tlinet_init(const FeatureScaler& scaler, int K, const TlinetConfig& cfg, std::uint64_t seed);

// Robustness r(s_0) of the network with maximum-likelihood selector draws.
double tlinet_forward(const Trajectory& traj, const TlinetModel& model, double beta);

struct TlinetLoss {
  double task = 0.0;
  double sparse = 0.0;
  double select = 0.0;
  double op = 0.0;
  double total = 0.0;
};

struct TlinetResult {
  TlinetModel model;
  stl::Formula formula;
  std::vector<double> loss_history;
  int retries = 0;
};

// Gradient descent on the composite loss; in_class[d] marks the positive samples.
TlinetResult tlinet_train(const std::vector<Trajectory>& data, const std::vector<bool>& in_class,
                          const TlinetConfig& cfg, std::uint64_t seed);

}  // namespace spoofsim
