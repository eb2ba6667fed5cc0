// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#include "spoofsim/detect/gru_autoencoder.hpp"

#include <cmath>
#include <stdexcept>

namespace spoofsim {

using Eigen::Map;
using Eigen::MatrixXd;
using Eigen::VectorXd;

FeatureScaler FeatureScaler::fit(const std::vector<Trajectory>& data) {
  FeatureScaler s;
  double n = 0.0;
  std::array<double, 3> sum{0, 0, 0}, sq{0, 0, 0};
  for (const auto& t : data) {
    for (const auto& p : t) {
      const double f[3] = {p.x, p.y, p.v};
      for (int i = 0; i < 3; ++i) {
        sum[i] += f[i];
        sq[i] += f[i] * f[i];
      }
      n += 1.0;
    }
  }
  if (n == 0.0) return s;
  for (int i = 0; i < 3; ++i) {
    s.mean[i] = sum[i] / n;
    const double var = std::max(sq[i] / n - s.mean[i] * s.mean[i], 0.0);
    s.scale[i] = var > 1e-12 ? std::sqrt(var) : 1.0;
  }
  return s;
}

MatrixXd FeatureScaler::apply(const Trajectory& t) const {
  MatrixXd z(3, static_cast<Eigen::Index>(t.size()));
  for (std::size_t k = 0; k < t.size(); ++k) {
    z(0, k) = (t[k].x - mean[0]) / scale[0];
    z(1, k) = (t[k].y - mean[1]) / scale[1];
    z(2, k) = (t[k].v - mean[2]) / scale[2];
  }
  return z;
}

Trajectory FeatureScaler::apply_states(const Trajectory& t) const {
  Trajectory out(t.size());
  for (std::size_t k = 0; k < t.size(); ++k)
    out[k] = {(t[k].x - mean[0]) / scale[0], (t[k].y - mean[1]) / scale[1], (t[k].v - mean[2]) / scale[2]};
  return out;
}

Trajectory FeatureScaler::invert(const MatrixXd& z) const {
  Trajectory out(z.cols());
  for (Eigen::Index k = 0; k < z.cols(); ++k)
    out[k] = {z(0, k) * scale[0] + mean[0], z(1, k) * scale[1] + mean[1], z(2, k) * scale[2] + mean[2]};
  return out;
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// GRU cell over a slice of the flat parameter vector:
// W (3H x n_in), U (3H x H), bW (3H), bU (3H); gate order r, z, n.
struct Cell {
  int nin;
  int H;

  static Eigen::Index size(int nin, int H) { return 3 * H * nin + 3 * H * H + 6 * H; }

  struct Step {
    VectorXd x, h_prev, r, z, n, gh_n, h;
  };

  Step forward(const double* p, const VectorXd& x, const VectorXd& h_prev) const {
    Map<const MatrixXd> W(p, 3 * H, nin);
    Map<const MatrixXd> U(p + 3 * H * nin, 3 * H, H);
    Map<const VectorXd> bW(p + 3 * H * nin + 3 * H * H, 3 * H);
    Map<const VectorXd> bU(p + 3 * H * nin + 3 * H * H + 3 * H, 3 * H);
    const VectorXd gx = W * x + bW;
    const VectorXd gh = U * h_prev + bU;
    Step s;
    s.x = x;
    s.h_prev = h_prev;
    s.r = (gx.segment(0, H) + gh.segment(0, H)).unaryExpr(&sigmoid);
    s.z = (gx.segment(H, H) + gh.segment(H, H)).unaryExpr(&sigmoid);
    s.gh_n = gh.segment(2 * H, H);
    s.n = (gx.segment(2 * H, H) + s.r.cwiseProduct(s.gh_n)).array().tanh().matrix();
    s.h = (VectorXd::Ones(H) - s.z).cwiseProduct(s.n) + s.z.cwiseProduct(h_prev);
    return s;
  }

  // Returns dL/dh_prev and writes dL/dx into dx when requested.
  VectorXd backward(const double* p, double* g, const Step& s, const VectorXd& dh, VectorXd* dx) const {
    Map<const MatrixXd> W(p, 3 * H, nin);
    Map<const MatrixXd> U(p + 3 * H * nin, 3 * H, H);
    Map<MatrixXd> dW(g, 3 * H, nin);
    Map<MatrixXd> dU(g + 3 * H * nin, 3 * H, H);
    Map<VectorXd> dbW(g + 3 * H * nin + 3 * H * H, 3 * H);
    Map<VectorXd> dbU(g + 3 * H * nin + 3 * H * H + 3 * H, 3 * H);
    const auto one = VectorXd::Ones(H);
    const VectorXd dn = dh.cwiseProduct(one - s.z);
    const VectorXd dz = dh.cwiseProduct(s.h_prev - s.n);
    const VectorXd dn_pre = dn.cwiseProduct(one - s.n.cwiseProduct(s.n));
    const VectorXd dr = dn_pre.cwiseProduct(s.gh_n);
    VectorXd dgx(3 * H), dgh(3 * H);
    dgx.segment(0, H) = dr.cwiseProduct(s.r.cwiseProduct(one - s.r));
    dgx.segment(H, H) = dz.cwiseProduct(s.z.cwiseProduct(one - s.z));
    dgx.segment(2 * H, H) = dn_pre;
    dgh.segment(0, 2 * H) = dgx.segment(0, 2 * H);
    dgh.segment(2 * H, H) = dn_pre.cwiseProduct(s.r);
    dW.noalias() += dgx * s.x.transpose();
    dU.noalias() += dgh * s.h_prev.transpose();
    dbW += dgx;
    dbU += dgh;
    if (dx) *dx = W.transpose() * dgx;
    return dh.cwiseProduct(s.z) + U.transpose() * dgh;
  }
};

constexpr int kIn = 3;

}  // namespace

GruAutoencoder::GruAutoencoder(int latent, Rng& rng) : m_(latent) {
  layout();
  // Uniform(-1/sqrt(H), 1/sqrt(H)), the usual recurrent initialization.
  std::uniform_real_distribution<double> u(-1.0 / std::sqrt(double(m_)), 1.0 / std::sqrt(double(m_)));
  for (Eigen::Index i = 0; i < theta_.size(); ++i) theta_[i] = u(rng);
}

GruAutoencoder::GruAutoencoder(int latent, VectorXd params) : m_(latent) {
  layout();
  if (params.size() != theta_.size()) throw std::invalid_argument("autoencoder parameter count mismatch");
  theta_ = std::move(params);
}

void GruAutoencoder::layout() {
  if (m_ < 1) throw std::invalid_argument("latent dimension must be positive");
  enc_off_ = 0;
  dec_off_ = enc_off_ + Cell::size(kIn, m_);
  out_off_ = dec_off_ + Cell::size(m_, m_);
  theta_ = VectorXd::Zero(out_off_ + kIn * m_ + kIn);
}

VectorXd GruAutoencoder::encode(const MatrixXd& z) const {
  const Cell enc{kIn, m_};
  VectorXd h = VectorXd::Zero(m_);
  for (Eigen::Index k = 0; k < z.cols(); ++k) h = enc.forward(theta_.data() + enc_off_, z.col(k), h).h;
  return h;
}

MatrixXd GruAutoencoder::decode(const VectorXd& h0, int K) const {
  const Cell dec{m_, m_};
  Map<const MatrixXd> Wo(theta_.data() + out_off_, kIn, m_);
  Map<const VectorXd> bo(theta_.data() + out_off_ + kIn * m_, kIn);
  MatrixXd out(kIn, K);
  VectorXd h = h0;
  for (int k = 0; k < K; ++k) {
    h = dec.forward(theta_.data() + dec_off_, h0, h).h;
    out.col(k) = Wo * h + bo;
  }
  return out;
}

GruAutoencoder::SampleLoss GruAutoencoder::accumulate(const MatrixXd& z, const VectorXd* target, double cl_weight,
                                                      VectorXd& grad) const {
  if (grad.size() != theta_.size()) grad = VectorXd::Zero(theta_.size());
  const int K = static_cast<int>(z.cols());
  const Cell enc{kIn, m_};
  const Cell dec{m_, m_};
  const double* p = theta_.data();
  double* g = grad.data();

  std::vector<Cell::Step> es(K), ds(K);
  VectorXd h = VectorXd::Zero(m_);
  for (int k = 0; k < K; ++k) {
    es[k] = enc.forward(p + enc_off_, z.col(k), h);
    h = es[k].h;
  }
  const VectorXd latent = h;

  Map<const MatrixXd> Wo(p + out_off_, kIn, m_);
  Map<const VectorXd> bo(p + out_off_ + kIn * m_, kIn);
  Map<MatrixXd> dWo(g + out_off_, kIn, m_);
  Map<VectorXd> dbo(g + out_off_ + kIn * m_, kIn);

  SampleLoss loss;
  std::vector<VectorXd> dout(K);
  h = latent;
  for (int k = 0; k < K; ++k) {
    ds[k] = dec.forward(p + dec_off_, latent, h);
    h = ds[k].h;
    const VectorXd err = Wo * h + bo - z.col(k);
    loss.recon += err.squaredNorm();
    dout[k] = 2.0 * err;
  }

  VectorXd dlatent = VectorXd::Zero(m_);
  VectorXd dh = VectorXd::Zero(m_);
  VectorXd dx;
  for (int k = K - 1; k >= 0; --k) {
    dWo.noalias() += dout[k] * ds[k].h.transpose();
    dbo += dout[k];
    dh += Wo.transpose() * dout[k];
    dh = dec.backward(p + dec_off_, g + dec_off_, ds[k], dh, &dx);
    dlatent += dx;
  }
  dlatent += dh;  // decoder initial state

  if (target && cl_weight != 0.0) {
    const VectorXd diff = latent - *target;
    loss.cluster = diff.squaredNorm();
    dlatent += 2.0 * cl_weight * diff;
  }

  dh = dlatent;
  for (int k = K - 1; k >= 0; --k) dh = enc.backward(p + enc_off_, g + enc_off_, es[k], dh, nullptr);
  return loss;
}

}  // namespace spoofsim
