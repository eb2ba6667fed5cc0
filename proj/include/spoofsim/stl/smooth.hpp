// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#pragma once

#include <vector>

#include "spoofsim/geometry.hpp"
#include "spoofsim/stl/formula.hpp"

namespace spoofsim::stl {

// Parametric formula whose operators are chosen by selector probabilities.
//   boolean:  p_kappa >= 0.5 selects the disjunction, p_w[i] >= 0.5 keeps child i
//   temporal: p_rho >= 0.5 selects eventually; window [k1, k2] is real-valued
enum class SmoothKind { predicate, boolean, temporal };

struct SmoothNode {
  SmoothKind kind = SmoothKind::predicate;
  Coeffs a{0.0, 0.0, 0.0};
  double b = 0.0;
  double p_kappa = 0.0;
  std::vector<double> p_w;
  double p_rho = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  std::vector<SmoothNode> children;
};

struct SmoothOptions {
  double beta = 10.0;  // softmax temperature
  double eta = 0.1;    // slope of the soft time window
  // Maximum-likelihood draw of every selector, gradients passed straight through to p.
  bool hard_selectors = false;
};

enum class ParamGroup { predicate, window, selector };

// Flat parameter order, depth first:
//   predicate: a0 a1 a2 b;  boolean: p_kappa p_w... children;  temporal: p_rho k1 k2 child
std::vector<double> flatten(const SmoothNode& f);
void unflatten(SmoothNode& f, const std::vector<double>& params);
std::vector<ParamGroup> param_groups(const SmoothNode& f);

// Soft indicator of n lying in [k1, k2]; exactly 1 inside and 0 outside for integer n when eta <= 1.
double window_weight(double n, double k1, double k2, double eta);

struct SmoothResult {
  double value = 0.0;
  std::vector<double> grad;  // d value / d flat params
};

SmoothResult smooth_robustness(const Trajectory& traj, const SmoothNode& f, int k, const SmoothOptions& opt,
                               bool with_grad = true);
SmoothResult smooth_robustness(const Trajectory& traj, const Formula& f, int k, double beta,
                               double eta = 0.1);

SmoothNode to_smooth(const Formula& f);

// Maximum-likelihood draw of every selector; windows keep slots with weight >= 0.5.
Formula extract(const SmoothNode& f, double eta);

}  // namespace spoofsim::stl
