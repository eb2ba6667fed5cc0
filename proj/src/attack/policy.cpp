// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#include "spoofsim/attack/policy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace spoofsim {

Mlp::Mlp(std::vector<int> sizes, Rng& rng) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("Mlp: need at least input and output sizes");
  Eigen::Index total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    w_off_.push_back(total);
    total += Eigen::Index(sizes_[l]) * sizes_[l + 1];
    b_off_.push_back(total);
    total += sizes_[l + 1];
  }
  theta_ = VectorXd::Zero(total);
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const double bound = std::sqrt(6.0 / (sizes_[l] + sizes_[l + 1]));
    std::uniform_real_distribution<double> u(-bound, bound);
    for (Eigen::Index i = 0; i < Eigen::Index(sizes_[l]) * sizes_[l + 1]; ++i) theta_[w_off_[l] + i] = u(rng);
  }
}

Mlp::Mlp(std::vector<int> sizes, const VectorXd& params) {
  Rng unused(0);
  *this = Mlp(std::move(sizes), unused);
  if (params.size() != theta_.size()) throw std::invalid_argument("Mlp: parameter count does not match layer sizes");
  theta_ = params;
}

VectorXd Mlp::forward(const VectorXd& x, Cache* cache) const {
  VectorXd h = x;
  if (cache) {
    cache->act.clear();
    cache->act.push_back(x);
  }
  const std::size_t n_layers = sizes_.size() - 1;
  for (std::size_t l = 0; l < n_layers; ++l) {
    Eigen::Map<const MatrixXd> W(theta_.data() + w_off_[l], sizes_[l + 1], sizes_[l]);
    Eigen::Map<const VectorXd> b(theta_.data() + b_off_[l], sizes_[l + 1]);
    VectorXd z = W * h + b;
    if (l + 1 < n_layers) z = z.array().tanh();
    h = std::move(z);
    if (cache) cache->act.push_back(h);
  }
  return h;
}

VectorXd Mlp::backward(const Cache& cache, const VectorXd& grad_out, VectorXd& grad) const {
  if (grad.size() != theta_.size()) grad = VectorXd::Zero(theta_.size());
  VectorXd g = grad_out;
  const std::size_t n_layers = sizes_.size() - 1;
  for (std::size_t l = n_layers; l-- > 0;) {
    if (l + 1 < n_layers) g = g.array() * (1.0 - cache.act[l + 1].array().square());
    Eigen::Map<const MatrixXd> W(theta_.data() + w_off_[l], sizes_[l + 1], sizes_[l]);
    Eigen::Map<MatrixXd> dW(grad.data() + w_off_[l], sizes_[l + 1], sizes_[l]);
    Eigen::Map<VectorXd> db(grad.data() + b_off_[l], sizes_[l + 1]);
    dW.noalias() += g * cache.act[l].transpose();
    db += g;
    g = W.transpose() * g;
  }
  return g;
}

Adam::Adam(Eigen::Index n, double lr, double beta1, double beta2, double eps)
    : lr_(lr), b1_(beta1), b2_(beta2), eps_(eps), m_(VectorXd::Zero(n)), v_(VectorXd::Zero(n)) {}

void Adam::step(VectorXd& params, const VectorXd& grad) {
  if (m_.size() != params.size()) {
    m_ = VectorXd::Zero(params.size());
    v_ = VectorXd::Zero(params.size());
  }
  ++t_;
  m_ = b1_ * m_ + (1.0 - b1_) * grad;
  v_ = b2_ * v_ + (1.0 - b2_) * grad.array().square().matrix();
  const double c1 = 1.0 - std::pow(b1_, double(t_));
  const double c2 = 1.0 - std::pow(b2_, double(t_));
  params.array() -= lr_ * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps_);
}

std::vector<double> masked_policy(const VectorXd& logits, const std::vector<bool>& mask, double alpha) {
  if (logits.size() != static_cast<Eigen::Index>(mask.size()))
    throw std::invalid_argument("masked_policy: logits and mask differ in length");
  if (std::none_of(mask.begin(), mask.end(), [](bool b) { return b; }))
    throw NoFeasibleAction("masked_policy: mask has no feasible action");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("masked_policy: alpha must lie in (0, 1)");
  const Eigen::Index L = logits.size();
  std::vector<double> z(L);
  double zmax = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < L; ++i) {
    z[i] = logits[i] + std::log(alpha + (1.0 - alpha) * (mask[i] ? 1.0 : 0.0));
    zmax = std::max(zmax, z[i]);
  }
  double s = 0.0;
  for (auto& v : z) {
    v = std::exp(v - zmax);
    s += v;
  }
  for (auto& v : z) v /= s;
  return z;
}

std::vector<double> softmax(const VectorXd& logits) {
  return masked_policy(logits, std::vector<bool>(logits.size(), true), 0.5);
}

PolicyNet::PolicyNet(int n_actions, Rng& rng, int hidden)
    : trunk({kObsSize, hidden, hidden}, rng), pi_head({hidden, n_actions}, rng), v_head({hidden, 1}, rng) {
  // Small initial logits keep the first rollouts near uniform.
  pi_head.params() *= 0.01;
}

PolicyNet::Output PolicyNet::forward(const VectorXd& obs, Caches* caches) const {
  Output o;
  VectorXd h = trunk.forward(obs, caches ? &caches->trunk : nullptr);
  h = h.array().tanh();
  if (caches) caches->hidden = h;
  o.logits = pi_head.forward(h, caches ? &caches->pi : nullptr);
  o.value = v_head.forward(h, caches ? &caches->v : nullptr)[0];
  return o;
}

void PolicyNet::backward(const Caches& c, const VectorXd& d_logits, double d_value, Grads& g) const {
  VectorXd dh = pi_head.backward(c.pi, d_logits, g.pi);
  VectorXd dv(1);
  dv[0] = d_value;
  dh += v_head.backward(c.v, dv, g.v);
  dh = dh.array() * (1.0 - c.hidden.array().square());
  trunk.backward(c.trunk, dh, g.trunk);
}

PolicyNet::Grads PolicyNet::zero_grads() const {
  return {VectorXd::Zero(trunk.params().size()), VectorXd::Zero(pi_head.params().size()),
          VectorXd::Zero(v_head.params().size())};
}

VectorXd observation(const MdpState& s) {
  auto scale = [](double v, double lo, double hi) { return std::clamp(2.0 * (v - lo) / (hi - lo) - 1.0, -1.0, 1.0); };
  VectorXd o(PolicyNet::kObsSize);
  o << scale(s.prev_sensed.x, kObsBounds.x_min, kObsBounds.x_max), scale(s.prev_sensed.y, kObsBounds.y_min, kObsBounds.y_max),
      scale(s.prev_sensed.v, kObsBounds.v_min, kObsBounds.v_max), scale(s.true_state.x, kObsBounds.x_min, kObsBounds.x_max),
      scale(s.true_state.y, kObsBounds.y_min, kObsBounds.y_max), scale(s.true_state.v, kObsBounds.v_min, kObsBounds.v_max);
  return o;
}

namespace {

nlohmann::json mlp_to_json(const Mlp& m) {
  const VectorXd& p = m.params();
  return {{"sizes", m.sizes()}, {"params", std::vector<double>(p.data(), p.data() + p.size())}};
}

Mlp mlp_from_json(const nlohmann::json& j) {
  const auto sizes = j.at("sizes").get<std::vector<int>>();
  const auto p = j.at("params").get<std::vector<double>>();
  return Mlp(sizes, Eigen::Map<const VectorXd>(p.data(), Eigen::Index(p.size())));
}

}  // namespace

void save_policy(const PolicyNet& net, const std::string& path) {
  nlohmann::json j{{"trunk", mlp_to_json(net.trunk)}, {"pi_head", mlp_to_json(net.pi_head)},
                   {"v_head", mlp_to_json(net.v_head)}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write policy file " + path);
  out << j.dump() << "\n";
}

PolicyNet load_policy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing policy file " + path);
  nlohmann::json j;
  in >> j;
  PolicyNet net;
  net.trunk = mlp_from_json(j.at("trunk"));
  net.pi_head = mlp_from_json(j.at("pi_head"));
  net.v_head = mlp_from_json(j.at("v_head"));
  return net;
}

}  // namespace spoofsim
