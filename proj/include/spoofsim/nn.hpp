// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spoofsim/rng.hpp"

namespace spoofsim {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Fully connected network with tanh on hidden layers and a linear output layer.
// Parameters live in one flat vector so optimizers and serializers see a single tensor.
class Mlp {
 public:
  Mlp() = default;
  Mlp(std::vector<int> sizes, Rng& rng);
  Mlp(std::vector<int> sizes, const VectorXd& params);

  struct Cache {
    std::vector<VectorXd> act;  // act[0] = input, act[l] = post-activation of layer l
  };

  VectorXd forward(const VectorXd& x, Cache* cache = nullptr) const;
  // Accumulates dL/dparams into grad and returns dL/dinput.
  VectorXd backward(const Cache& cache, const VectorXd& grad_out, VectorXd& grad) const;

  VectorXd& params() { return theta_; }
  const VectorXd& params() const { return theta_; }
  const std::vector<int>& sizes() const { return sizes_; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }

 private:
  std::vector<int> sizes_;
  std::vector<Eigen::Index> w_off_, b_off_;
  VectorXd theta_;
};

class Adam {
 public:
  explicit Adam(Eigen::Index n = 0, double lr = 1e-3, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);
  void step(VectorXd& params, const VectorXd& grad);
  void set_lr(double lr) { lr_ = lr; }
  double lr() const { return lr_; }

 private:
  double lr_, b1_, b2_, eps_;
  long t_ = 0;
  VectorXd m_, v_;
};

}  // namespace spoofsim
