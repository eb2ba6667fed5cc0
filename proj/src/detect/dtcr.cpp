// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#include "spoofsim/detect/dtcr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "spoofsim/detect/kmeans.hpp"
#include "spoofsim/nn.hpp"

namespace spoofsim {

using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd ClusterModel::encode(const Trajectory& t) const { return autoencoder.encode(scaler.apply(t)); }

MatrixXd ClusterModel::latents(const std::vector<Trajectory>& data, Exec exec) const {
  const int n = static_cast<int>(data.size());
  MatrixXd H(autoencoder.latent(), n);
  if (exec == Exec::serial) {
    for (int d = 0; d < n; ++d) H.col(d) = encode(data[d]);
  } else {
#pragma omp parallel for schedule(static)
    for (int d = 0; d < n; ++d) H.col(d) = encode(data[d]);
  }
  return H;
}

std::pair<int, double> ClusterModel::nearest(const VectorXd& h) const {
  int best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (Eigen::Index p = 0; p < centers.cols(); ++p) {
    const double d = (h - centers.col(p)).norm();
    if (d < bd) {
      bd = d;
      best = static_cast<int>(p);
    }
  }
  return {best, bd};
}

IndicatorUpdate indicator_update(const MatrixXd& H, int P) {
  const Eigen::Index D = H.cols();
  if (P < 1 || D < P) throw ClusteringError("indicator update needs 1 <= P <= D");
  const MatrixXd G = H.transpose() * H;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(G);
  if (es.info() != Eigen::Success) throw ClusteringError("eigendecomposition of H^T H failed");
  IndicatorUpdate out;
  out.F.resize(D, P);
  const VectorXd& ev = es.eigenvalues();  // ascending
  const double top = std::max(ev(D - 1), 0.0);
  int nonzero = 0;
  for (int j = 0; j < P; ++j) {
    const Eigen::Index src = D - 1 - j;
    VectorXd col = es.eigenvectors().col(src);
    Eigen::Index arg = 0;
    col.cwiseAbs().maxCoeff(&arg);
    if (col(arg) < 0.0) col = -col;
    out.F.col(j) = col;
    if (ev(src) > 1e-10 * top && top > 0.0) ++nonzero;
  }
  out.rank_deficient = nonzero < P;
  return out;
}

namespace {

double cluster_loss(const MatrixXd& H, const MatrixXd& F) {
  return H.squaredNorm() - (H * F).squaredNorm();
}

double mean_recon(const ClusterModel& m, const std::vector<MatrixXd>& Z) {
  const int n = static_cast<int>(Z.size());
  std::vector<double> r(n);
#pragma omp parallel for schedule(static)
  for (int d = 0; d < n; ++d) {
    const VectorXd h = m.autoencoder.encode(Z[d]);
    r[d] = (m.autoencoder.decode(h, static_cast<int>(Z[d].cols())) - Z[d]).squaredNorm();
  }
  return std::accumulate(r.begin(), r.end(), 0.0) / n;
}

constexpr int kChunks = 8;

}  // namespace

DtcrLosses dtcr_losses(const std::vector<Trajectory>& batch, const ClusterModel& model, double lambda0) {
  if (batch.empty()) throw ClusteringError("DTCR losses of an empty batch");
  std::vector<MatrixXd> Z;
  for (const auto& t : batch) Z.push_back(model.scaler.apply(t));
  const MatrixXd H = model.latents(batch);
  const int P = model.indicator.cols() > 0 ? static_cast<int>(model.indicator.cols()) : model.clusters();
  const MatrixXd F = model.indicator.rows() == H.cols() ? model.indicator : indicator_update(H, P).F;
  DtcrLosses l;
  l.reconstruction = mean_recon(model, Z);
  l.cluster = cluster_loss(H, F);
  l.joint = l.reconstruction + lambda0 * l.cluster / static_cast<double>(batch.size());
  return l;
}

DtcrResult dtcr_train(const std::vector<Trajectory>& data, const DtcrConfig& cfg, std::uint64_t seed) {
  const int D = static_cast<int>(data.size());
  const int P = cfg.clusters;
  if (D < P) throw ClusteringError("dataset smaller than the cluster count");
  if (cfg.indicator_every < 1 || cfg.iterations < 1) throw ClusteringError("DTCR schedule must be positive");

  DtcrResult res;
  ClusterModel& m = res.model;
  m.scaler = FeatureScaler::fit(data);
  Rng init = make_rng(seed, "dtcr.init");
  m.autoencoder = GruAutoencoder(cfg.latent, init);
  std::vector<MatrixXd> Z;
  Z.reserve(D);
  for (const auto& t : data) Z.push_back(m.scaler.apply(t));

  auto encode_all = [&] {
    MatrixXd H(cfg.latent, D);
#pragma omp parallel for schedule(static)
    for (int d = 0; d < D; ++d) H.col(d) = m.autoencoder.encode(Z[d]);
    return H;
  };
  auto joint = [&](const MatrixXd& H, const MatrixXd& F) {
    return mean_recon(m, Z) + cfg.lambda0 * cluster_loss(H, F) / D;
  };
  auto record_update = [&](const MatrixXd& H) {
    IndicatorUpdate up = indicator_update(H, P);
    m.indicator = up.F;
    res.trace.rank_deficient = res.trace.rank_deficient || up.rank_deficient;
    const MatrixXd gram = m.indicator.transpose() * m.indicator;
    res.trace.orthonormality_error.push_back((gram - MatrixXd::Identity(P, P)).cwiseAbs().maxCoeff());
  };

  MatrixXd H = encode_all();
  record_update(H);

  Adam opt(m.autoencoder.param_count(), cfg.learning_rate);
  Rng order_rng = make_rng(seed, "dtcr.order");
  std::vector<int> order(D);
  std::iota(order.begin(), order.end(), 0);

  for (int it = 1; it <= cfg.iterations; ++it) {
    // Projection targets from the current indicator: cl_d = ||h_d - (H F) f_d^T||^2.
    const MatrixXd G = H * m.indicator;
    for (int pass = 0; pass < cfg.passes_per_iteration; ++pass) {
    std::shuffle(order.begin(), order.end(), order_rng);
    for (int start = 0; start < D; start += cfg.batch_size) {
      const int stop = std::min(D, start + cfg.batch_size);
      const int n = stop - start;
      std::vector<VectorXd> grads(kChunks, VectorXd::Zero(m.autoencoder.param_count()));
#pragma omp parallel for schedule(static)
      for (int c = 0; c < kChunks; ++c) {
        for (int j = start + c; j < stop; j += kChunks) {
          const int d = order[j];
          const VectorXd target = G * m.indicator.row(d).transpose();
          m.autoencoder.accumulate(Z[d], &target, cfg.lambda0, grads[c]);
        }
      }
      VectorXd g = VectorXd::Zero(m.autoencoder.param_count());
      for (const auto& gc : grads) g += gc;  // fixed order keeps results thread-count independent
      g /= n;
      if (!g.allFinite()) throw NumericalError("non-finite DTCR gradient");
      opt.step(m.autoencoder.params(), g);
    }
    }
    H = encode_all();
    if (it % cfg.indicator_every == 0) {
      res.trace.joint_before_update.push_back(joint(H, m.indicator));
      record_update(H);
      res.trace.joint_after_update.push_back(joint(H, m.indicator));
    }
    res.trace.joint.push_back(joint(H, m.indicator));
  }

  MatrixXd rows = m.indicator;
  if (cfg.normalize_rows) {
    for (Eigen::Index d = 0; d < rows.rows(); ++d) {
      const double n = rows.row(d).norm();
      if (n > 0.0) rows.row(d) /= n;
    }
  }
  const KMeansResult km = kmeans(rows, P, derive_seed(seed, "dtcr.kmeans"), cfg.kmeans_restarts);
  m.labels = km.labels;
  res.trace.kmeans_inertia = km.inertia;
  m.centers = MatrixXd::Zero(cfg.latent, P);
  std::vector<int> count(P, 0);
  for (int d = 0; d < D; ++d) {
    m.centers.col(km.labels[d]) += H.col(d);
    ++count[km.labels[d]];
  }
  for (int p = 0; p < P; ++p) m.centers.col(p) /= std::max(count[p], 1);
  res.pseudo_labels.assign(P, std::vector<bool>(D, false));
  for (int d = 0; d < D; ++d) res.pseudo_labels[km.labels[d]][d] = true;
  return res;
}

}  // namespace spoofsim
