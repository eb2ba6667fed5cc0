// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "spoofsim/geometry.hpp"
#include "spoofsim/rng.hpp"

namespace spoofsim {

// Per-feature z-scoring of (x, y, v).
struct FeatureScaler {
  std::array<double, 3> mean{0.0, 0.0, 0.0};
  std::array<double, 3> scale{1.0, 1.0, 1.0};

  static FeatureScaler fit(const std::vector<Trajectory>& data);
  Eigen::MatrixXd apply(const Trajectory& t) const;  // 3 x K
  Trajectory apply_states(const Trajectory& t) const;
  Trajectory invert(const Eigen::MatrixXd& z) const;
};

// Sequence autoencoder: a GRU encoder whose final state is the latent code, and a GRU decoder
// started from the latent code and fed it at every step, with a linear read-out per slot.
class GruAutoencoder {
 public:
  GruAutoencoder() = default;
  GruAutoencoder(int latent, Rng& rng);
  GruAutoencoder(int latent, Eigen::VectorXd params);

  int latent() const { return m_; }
  Eigen::Index param_count() const { return theta_.size(); }
  Eigen::VectorXd& params() { return theta_; }
  const Eigen::VectorXd& params() const { return theta_; }

  // Inputs are already scaled (3 x K).
  Eigen::VectorXd encode(const Eigen::MatrixXd& z) const;
  Eigen::MatrixXd decode(const Eigen::VectorXd& h, int K) const;

  // Per-sample objective ||decode(encode(z)) - z||^2 + cl_weight ||encode(z) - target||^2.
  // Adds the gradient into grad and returns the two loss terms.
  struct SampleLoss {
    double recon = 0.0;
    double cluster = 0.0;
  };
  SampleLoss accumulate(const Eigen::MatrixXd& z, const Eigen::VectorXd* target, double cl_weight,
                        Eigen::VectorXd& grad) const;

 private:
  void layout();

  int m_ = 16;
  Eigen::Index enc_off_ = 0, dec_off_ = 0, out_off_ = 0;
  Eigen::VectorXd theta_;
};

}  // namespace spoofsim
