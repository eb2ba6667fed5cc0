// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "spoofsim/attack/env.hpp"
#include "spoofsim/nn.hpp"

namespace spoofsim {

class NoFeasibleAction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Softmax of z_l + log(alpha + (1 - alpha) m_l).
std::vector<double> masked_policy(const VectorXd& logits, const std::vector<bool>& mask, double alpha);
std::vector<double> softmax(const VectorXd& logits);

// Observation scaling bounds, mapped to [-1, 1] and clipped.
struct ObservationBounds {
  double x_min = -20.0, x_max = 40.0;
  double y_min = 0.0, y_max = 60.0;
  double v_min = -100.0, v_max = 100.0;
};
inline constexpr ObservationBounds kObsBounds{};

// Shared tanh trunk with two hidden layers, a logit head over the action grid and a scalar value head.
class PolicyNet {
 public:
  static constexpr int kObsSize = 6;

  PolicyNet() = default;
  PolicyNet(int n_actions, Rng& rng, int hidden = 64);

  struct Output {
    VectorXd logits;
    double value = 0.0;
  };
  struct Caches {
    Mlp::Cache trunk, pi, v;
    VectorXd hidden;
  };
  struct Grads {
    VectorXd trunk, pi, v;
  };

  Output forward(const VectorXd& obs, Caches* caches = nullptr) const;
  void backward(const Caches& c, const VectorXd& d_logits, double d_value, Grads& g) const;
  Grads zero_grads() const;
  int n_actions() const { return pi_head.output_size(); }

  Mlp trunk, pi_head, v_head;
};

VectorXd observation(const MdpState& s);

void save_policy(const PolicyNet& net, const std::string& path);
PolicyNet load_policy(const std::string& path);

}  // namespace spoofsim
