// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#include "spoofsim/detect/tlinet.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "spoofsim/nn.hpp"

namespace spoofsim {

using stl::ParamGroup;
using stl::SmoothKind;
using stl::SmoothNode;

TlinetConfig tlinet_class_defaults(int class_index) {
  static const double table[6][3] = {
      {4e-2, 5.0, 5.0}, {1e-3, 5.0, 5.0}, {1e-1, 10.0, 10.0}, {1e-3, 5.0, 5.0}, {2e-2, 5.0, 5.0}, {2e-2, 5.0, 5.0},
  };
  TlinetConfig c;
  const int i = std::clamp(class_index, 0, 5);
  c.lambda_sparse = table[i][0];
  c.lambda_select = table[i][1];
  c.lambda_operator = table[i][2];
  return c;
}

namespace {

stl::Formula unscale(const stl::Formula& f, const FeatureScaler& s) {
  stl::Formula g = f;
  if (f.op == stl::Op::predicate) {
    // a . (s - mu) / sigma - b  =  (a / sigma) . s - (b + a . mu / sigma)
    double shift = 0.0;
    for (int i = 0; i < 3; ++i) {
      g.a[i] = f.a[i] / s.scale[i];
      shift += f.a[i] * s.mean[i] / s.scale[i];
    }
    g.b = f.b + shift;
    return g;
  }
  for (auto& c : g.children) c = unscale(c, s);
  return g;
}

stl::SmoothOptions hard_options(double beta, double eta) {
  stl::SmoothOptions o;
  o.beta = beta;
  o.eta = eta;
  o.hard_selectors = true;
  return o;
}

// Keeps probabilities in [0,1] and windows inside the trajectory.
void project(SmoothNode& n, int K) {
  n.p_kappa = std::clamp(n.p_kappa, 0.0, 1.0);
  n.p_rho = std::clamp(n.p_rho, 0.0, 1.0);
  for (auto& w : n.p_w) w = std::clamp(w, 0.0, 1.0);
  if (n.kind == SmoothKind::temporal) {
    n.k1 = std::clamp(n.k1, 0.0, double(K - 1));
    n.k2 = std::clamp(n.k2, n.k1, double(K - 1));
  }
  for (auto& c : n.children) project(c, K);
}

}  // namespace

stl::Formula TlinetModel::extract() const { return unscale(stl::extract(network, eta), scaler); }

TlinetModel tlinet_init(const FeatureScaler& scaler, int K, const TlinetConfig& cfg, std::uint64_t seed) {
  if (cfg.units < 1) throw std::invalid_argument("TLINet needs at least one unit");
  if (K < 2) throw std::invalid_argument("TLINet needs trajectories of at least two slots");
  Rng rng = make_rng(seed, "tlinet.init");
  std::normal_distribution<double> coef(0.0, 0.5);
  std::uniform_real_distribution<double> prob(0.3, 0.7), start(0.0, 0.8 * (K - 1));
  TlinetModel m;
  m.scaler = scaler;
  m.eta = cfg.eta;
  m.network.kind = SmoothKind::boolean;
  m.network.p_kappa = prob(rng);
  for (int u = 0; u < cfg.units; ++u) {
    SmoothNode pred;
    pred.a = {coef(rng), coef(rng), coef(rng)};
    pred.b = coef(rng);
    SmoothNode temp;
    temp.kind = SmoothKind::temporal;
    temp.p_rho = prob(rng);
    temp.k1 = start(rng);
    temp.k2 = std::min(double(K - 1), temp.k1 + std::uniform_real_distribution<double>(1.0, 0.5 * K)(rng));
    temp.children.push_back(pred);
    m.network.children.push_back(temp);
    m.network.p_w.push_back(prob(rng));
  }
  return m;
}

double tlinet_forward(const Trajectory& traj, const TlinetModel& model, double beta) {
  return stl::smooth_robustness(model.scaler.apply_states(traj), model.network, 0,
                                hard_options(beta, model.eta), false)
      .value;
}

namespace {

constexpr int kChunks = 8;

struct Evaluation {
  TlinetLoss loss;
  std::vector<double> grad;
};

Evaluation evaluate(const std::vector<Trajectory>& scaled, const std::vector<bool>& in_class,
                    const SmoothNode& net, const TlinetConfig& cfg, const std::vector<ParamGroup>& groups) {
  const int D = static_cast<int>(scaled.size());
  const auto opt = hard_options(cfg.beta, cfg.eta);
  const std::size_t np = groups.size();
  int n_pos = 0;
  for (bool b : in_class) n_pos += b ? 1 : 0;
  const int n_neg = D - n_pos;
  auto weight = [&](bool pos) {
    if (!cfg.balance_classes || n_pos == 0 || n_neg == 0) return 1.0 / D;
    return 0.5 / (pos ? n_pos : n_neg);
  };

  std::vector<std::vector<double>> grads(kChunks, std::vector<double>(np, 0.0));
  std::vector<double> task(kChunks, 0.0);
#pragma omp parallel for schedule(static)
  for (int c = 0; c < kChunks; ++c) {
    for (int d = c; d < D; d += kChunks) {
      const auto r = stl::smooth_robustness(scaled[d], net, 0, opt, true);
      const double label = in_class[d] ? 1.0 : (cfg.signed_labels ? -1.0 : 0.0);
      const double e = std::exp(-label * r.value);
      const double w = weight(in_class[d]);
      task[c] += w * e;
      for (std::size_t i = 0; i < np; ++i) grads[c][i] += w * (-label * e) * r.grad[i];
    }
  }
  Evaluation ev;
  ev.grad.assign(np, 0.0);
  for (int c = 0; c < kChunks; ++c) {
    ev.loss.task += task[c];
    for (std::size_t i = 0; i < np; ++i) ev.grad[i] += grads[c][i];
  }

  // Regularizers read straight off the flat parameter vector.
  const auto params = stl::flatten(net);
  std::size_t i = 0;
  std::function<void(const SmoothNode&)> walk = [&](const SmoothNode& n) {
    switch (n.kind) {
      case SmoothKind::predicate:
        for (int j = 0; j < 3; ++j, ++i) {
          ev.loss.sparse += std::abs(params[i]);
          ev.grad[i] += cfg.lambda_sparse * (params[i] > 0 ? 1.0 : params[i] < 0 ? -1.0 : 0.0);
        }
        ++i;  // offset b is not penalized
        return;
      case SmoothKind::boolean: {
        const double p = params[i];
        ev.loss.op += p * (1 - p);
        ev.grad[i++] += cfg.lambda_operator * (1 - 2 * p);
        for (std::size_t j = 0; j < n.p_w.size(); ++j, ++i) {
          const double q = params[i];
          ev.loss.select += q * (1 - q);
          ev.grad[i] += cfg.lambda_select * (1 - 2 * q);
        }
        break;
      }
      case SmoothKind::temporal: {
        const double p = params[i];
        ev.loss.op += p * (1 - p);
        ev.grad[i] += cfg.lambda_operator * (1 - 2 * p);
        i += 3;
        break;
      }
    }
    for (const auto& ch : n.children) walk(ch);
  };
  walk(net);
  ev.loss.total = ev.loss.task + cfg.lambda_sparse * ev.loss.sparse + cfg.lambda_select * ev.loss.select +
                  cfg.lambda_operator * ev.loss.op;
  return ev;
}

}  // namespace

TlinetResult tlinet_train(const std::vector<Trajectory>& data, const std::vector<bool>& in_class,
                          const TlinetConfig& cfg, std::uint64_t seed) {
  if (data.empty()) throw std::invalid_argument("TLINet training set is empty");
  if (data.size() != in_class.size()) throw std::invalid_argument("TLINet label count mismatch");
  const int K = static_cast<int>(data.front().size());
  const FeatureScaler scaler = FeatureScaler::fit(data);
  std::vector<Trajectory> scaled;
  scaled.reserve(data.size());
  for (const auto& t : data) scaled.push_back(scaler.apply_states(t));

  TlinetResult res;
  double lr = cfg.learning_rate;
  for (int attempt = 0; attempt <= 3; ++attempt) {
    TlinetModel m = tlinet_init(scaler, K, cfg, seed);
    const auto groups = stl::param_groups(m.network);
    auto params = stl::flatten(m.network);
    Adam opt(static_cast<Eigen::Index>(params.size()), lr);
    Eigen::VectorXd theta = Eigen::Map<Eigen::VectorXd>(params.data(), params.size());
    std::vector<double> history;
    bool finite = true;
    for (int ep = 0; ep < cfg.epochs; ++ep) {
      const Evaluation ev = evaluate(scaled, in_class, m.network, cfg, groups);
      if (!std::isfinite(ev.loss.total)) {
        finite = false;
        break;
      }
      history.push_back(ev.loss.total);
      Eigen::VectorXd g = Eigen::Map<const Eigen::VectorXd>(ev.grad.data(), ev.grad.size());
      if (!g.allFinite()) {
        finite = false;
        break;
      }
      opt.step(theta, g);
      std::vector<double> flat(theta.data(), theta.data() + theta.size());
      stl::unflatten(m.network, flat);
      project(m.network, K);
      const auto projected = stl::flatten(m.network);
      theta = Eigen::Map<const Eigen::VectorXd>(projected.data(), projected.size());
    }
    if (finite) {
      res.model = m;
      res.formula = m.extract();
      res.loss_history = std::move(history);
      res.retries = attempt;
      return res;
    }
    lr *= 0.5;
  }
  throw NumericalError("TLINet loss stayed non-finite after three learning-rate halvings");
}

}  // namespace spoofsim
