// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#include "spoofsim/stl/smooth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spoofsim::stl {

namespace {

void flatten_into(const SmoothNode& f, std::vector<double>& out) {
  switch (f.kind) {
    case SmoothKind::predicate:
      out.insert(out.end(), f.a.begin(), f.a.end());
      out.push_back(f.b);
      return;
    case SmoothKind::boolean:
      out.push_back(f.p_kappa);
      out.insert(out.end(), f.p_w.begin(), f.p_w.end());
      break;
    case SmoothKind::temporal:
      out.push_back(f.p_rho);
      out.push_back(f.k1);
      out.push_back(f.k2);
      break;
  }
  for (const auto& c : f.children) flatten_into(c, out);
}

std::size_t unflatten_from(SmoothNode& f, const std::vector<double>& p, std::size_t i) {
  switch (f.kind) {
    case SmoothKind::predicate:
      for (auto& c : f.a) c = p.at(i++);
      f.b = p.at(i++);
      return i;
    case SmoothKind::boolean:
      f.p_kappa = p.at(i++);
      for (auto& w : f.p_w) w = p.at(i++);
      break;
    case SmoothKind::temporal:
      f.p_rho = p.at(i++);
      f.k1 = p.at(i++);
      f.k2 = p.at(i++);
      break;
  }
  for (auto& c : f.children) i = unflatten_from(c, p, i);
  return i;
}

void groups_into(const SmoothNode& f, std::vector<ParamGroup>& out) {
  switch (f.kind) {
    case SmoothKind::predicate:
      out.insert(out.end(), kFeatures + 1, ParamGroup::predicate);
      return;
    case SmoothKind::boolean:
      out.insert(out.end(), 1 + f.p_w.size(), ParamGroup::selector);
      break;
    case SmoothKind::temporal:
      out.push_back(ParamGroup::selector);
      out.push_back(ParamGroup::window);
      out.push_back(ParamGroup::window);
      break;
  }
  for (const auto& c : f.children) groups_into(c, out);
}

std::size_t param_count(const SmoothNode& f) {
  std::size_t n = 0;
  switch (f.kind) {
    case SmoothKind::predicate: return kFeatures + 1;
    case SmoothKind::boolean: n = 1 + f.p_w.size(); break;
    case SmoothKind::temporal: n = 3; break;
  }
  for (const auto& c : f.children) n += param_count(c);
  return n;
}

struct WindowTerm {
  double weight;
  double d_k1;
  double d_k2;
};

// The ramp relu(z + eta) - relu(z), written as a clamp so plateaus come out exact.
WindowTerm window_term(double n, double k1, double k2, double eta) {
  const double za = n - k1;
  const double zb = k2 - n;
  const double a = std::clamp(za + eta, 0.0, eta);
  const double b = std::clamp(zb + eta, 0.0, eta);
  const bool ramp_a = za + eta > 0.0 && za <= 0.0;
  const bool ramp_b = zb + eta > 0.0 && zb <= 0.0;
  if (a <= b) return {a / eta, ramp_a ? -1.0 / eta : 0.0, 0.0};
  return {b / eta, 0.0, ramp_b ? 1.0 / eta : 0.0};
}

// Weighted softmax average S = sum c_i e^{beta x_i} x_i / sum c_i e^{beta x_i} and its partials.
struct SoftAvg {
  double value = 0.0;
  std::vector<double> dx;
  std::vector<double> dc;
};

SoftAvg soft_average(const std::vector<double>& x, const std::vector<double>& c, double beta, double sign) {
  const std::size_t n = x.size();
  SoftAvg r;
  r.dx.assign(n, 0.0);
  r.dc.assign(n, 0.0);
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    if (c[i] > 0.0) m = std::max(m, beta * sign * x[i]);
  if (!std::isfinite(m)) return r;  // no weight anywhere
  std::vector<double> e(n);
  double z = 0.0, num = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    // Unweighted slots only feed the window gradient; cap them to stay finite.
    e[i] = std::exp(std::min(beta * sign * x[i] - m, 50.0));
    z += c[i] * e[i];
    num += c[i] * e[i] * sign * x[i];
  }
  const double s = num / z;  // soft max of sign * x
  r.value = sign * s;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = sign * x[i];
    // d(sign * S(sign x)) / dx_i = S_i'(y)
    r.dx[i] = c[i] * e[i] / z * (1.0 + beta * (y - s));
    r.dc[i] = sign * e[i] / z * (y - s);
  }
  return r;
}

// Mixture p * softmax + (1 - p) * softmin of weighted values.
struct Mix {
  double value;
  std::vector<double> dx;
  std::vector<double> dc;
  double dp;
};

Mix mix(const std::vector<double>& x, const std::vector<double>& c, double p, double beta) {
  const SoftAvg hi = soft_average(x, c, beta, 1.0);
  const SoftAvg lo = soft_average(x, c, beta, -1.0);
  Mix m;
  m.value = p * hi.value + (1.0 - p) * lo.value;
  m.dp = hi.value - lo.value;
  m.dx.resize(x.size());
  m.dc.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    m.dx[i] = p * hi.dx[i] + (1.0 - p) * lo.dx[i];
    m.dc[i] = p * hi.dc[i] + (1.0 - p) * lo.dc[i];
  }
  return m;
}

double draw(double p) { return p >= 0.5 ? 1.0 : 0.0; }

std::vector<double> effective_w(const SmoothNode& f, bool hard) {
  if (!hard) return f.p_w;
  std::vector<double> w(f.p_w.size());
  bool any = false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = draw(f.p_w[i]);
    any = any || w[i] > 0.0;
  }
  // An empty selection keeps the most likely child.
  if (!any && !w.empty())
    w[std::max_element(f.p_w.begin(), f.p_w.end()) - f.p_w.begin()] = 1.0;
  return w;
}

// Robustness of a node at every slot plus what the backward pass needs.
struct Cache {
  std::vector<double> value;
  std::vector<Cache> children;
};

class Evaluator {
 public:
  Evaluator(const Trajectory& s, const SmoothOptions& opt) : s_(s), opt_(opt), K_(static_cast<int>(s.size())) {}

  // Evaluates only the slots flagged in `need`; the rest stay 0 and are never read.
  Cache forward(const SmoothNode& f, const std::vector<char>& need) const {
    Cache c;
    c.value.assign(K_, 0.0);
    switch (f.kind) {
      case SmoothKind::predicate:
        for (int k = 0; k < K_; ++k)
          if (need[k]) c.value[k] = f.a[0] * s_[k].x + f.a[1] * s_[k].y + f.a[2] * s_[k].v - f.b;
        break;
      case SmoothKind::boolean: {
        for (const auto& ch : f.children) c.children.push_back(forward(ch, need));
        const auto w = effective_w(f, opt_.hard_selectors);
        const double p = opt_.hard_selectors ? draw(f.p_kappa) : f.p_kappa;
        std::vector<double> x(f.children.size());
        for (int k = 0; k < K_; ++k) {
          if (!need[k]) continue;
          for (std::size_t i = 0; i < x.size(); ++i) x[i] = c.children[i].value[k];
          c.value[k] = mix(x, w, p, opt_.beta).value;
        }
        break;
      }
      case SmoothKind::temporal: {
        const double p = opt_.hard_selectors ? draw(f.p_rho) : f.p_rho;
        std::vector<double> x, w;
        std::vector<int> idx;
        std::vector<char> child_need(K_, 0);
        for (int k = 0; k < K_; ++k) {
          if (!need[k]) continue;
          window(f, k, x, w, idx, nullptr, nullptr);
          for (int j : idx) child_need[j] = 1;
        }
        c.children.push_back(forward(f.children[0], child_need));
        for (int k = 0; k < K_; ++k) {
          if (!need[k]) continue;
          window(f, k, x, w, idx, nullptr, nullptr);
          for (std::size_t i = 0; i < idx.size(); ++i) x[i] = c.children[0].value[idx[i]];
          c.value[k] = mix(x, w, p, opt_.beta).value;
        }
        break;
      }
    }
    return c;
  }

  // dv: d out / d node value per slot; g points at this node's slice of the flat gradient.
  void backward(const SmoothNode& f, const Cache& c, const std::vector<double>& dv, double* g) const {
    switch (f.kind) {
      case SmoothKind::predicate:
        for (int k = 0; k < K_; ++k) {
          if (dv[k] == 0.0) continue;
          g[0] += dv[k] * s_[k].x;
          g[1] += dv[k] * s_[k].y;
          g[2] += dv[k] * s_[k].v;
          g[3] -= dv[k];
        }
        return;
      case SmoothKind::boolean: {
        const auto w = effective_w(f, opt_.hard_selectors);
        const double p = opt_.hard_selectors ? draw(f.p_kappa) : f.p_kappa;
        const std::size_t n = f.children.size();
        std::vector<std::vector<double>> dchild(n, std::vector<double>(K_, 0.0));
        std::vector<double> x(n);
        for (int k = 0; k < K_; ++k) {
          if (dv[k] == 0.0) continue;
          for (std::size_t i = 0; i < n; ++i) x[i] = c.children[i].value[k];
          const Mix m = mix(x, w, p, opt_.beta);
          g[0] += dv[k] * m.dp;
          for (std::size_t i = 0; i < n; ++i) {
            g[1 + i] += dv[k] * m.dc[i];
            dchild[i][k] += dv[k] * m.dx[i];
          }
        }
        double* cg = g + 1 + n;
        for (std::size_t i = 0; i < n; ++i) {
          backward(f.children[i], c.children[i], dchild[i], cg);
          cg += param_count(f.children[i]);
        }
        return;
      }
      case SmoothKind::temporal: {
        const double p = opt_.hard_selectors ? draw(f.p_rho) : f.p_rho;
        std::vector<double> dchild(K_, 0.0);
        std::vector<double> x, w, dk1, dk2;
        std::vector<int> idx;
        for (int k = 0; k < K_; ++k) {
          if (dv[k] == 0.0) continue;
          window(f, k, x, w, idx, &dk1, &dk2);
          for (std::size_t i = 0; i < idx.size(); ++i) x[i] = c.children[0].value[idx[i]];
          const Mix m = mix(x, w, p, opt_.beta);
          g[0] += dv[k] * m.dp;
          for (std::size_t i = 0; i < idx.size(); ++i) {
            g[1] += dv[k] * m.dc[i] * dk1[i];
            g[2] += dv[k] * m.dc[i] * dk2[i];
            dchild[idx[i]] += dv[k] * m.dx[i];
          }
        }
        backward(f.children[0], c.children[0], dchild, g + 3);
        return;
      }
    }
  }

 private:
  // Slots with non-zero window weight relative to k, clipped to the trajectory.
  void window(const SmoothNode& f, int k, std::vector<double>& x, std::vector<double>& w, std::vector<int>& idx,
              std::vector<double>* dk1, std::vector<double>* dk2) const {
    x.clear();
    w.clear();
    idx.clear();
    if (dk1) dk1->clear();
    if (dk2) dk2->clear();
    const int lo = std::max(0, k + static_cast<int>(std::floor(f.k1 - opt_.eta)));
    const int hi = std::min(K_ - 1, k + static_cast<int>(std::ceil(f.k2 + opt_.eta)));
    for (int j = lo; j <= hi; ++j) {
      const WindowTerm t = window_term(j - k, f.k1, f.k2, opt_.eta);
      if (t.weight <= 0.0 && t.d_k1 == 0.0 && t.d_k2 == 0.0) continue;
      idx.push_back(j);
      x.push_back(0.0);
      w.push_back(std::max(t.weight, 0.0));
      if (dk1) dk1->push_back(t.d_k1);
      if (dk2) dk2->push_back(t.d_k2);
    }
  }

  const Trajectory& s_;
  SmoothOptions opt_;
  int K_;
};

}  // namespace

std::vector<double> flatten(const SmoothNode& f) {
  std::vector<double> out;
  flatten_into(f, out);
  return out;
}

void unflatten(SmoothNode& f, const std::vector<double>& params) {
  if (unflatten_from(f, params, 0) != params.size()) throw StlError("parameter vector has the wrong length");
}

std::vector<ParamGroup> param_groups(const SmoothNode& f) {
  std::vector<ParamGroup> out;
  groups_into(f, out);
  return out;
}

double window_weight(double n, double k1, double k2, double eta) { return window_term(n, k1, k2, eta).weight; }

SmoothResult smooth_robustness(const Trajectory& traj, const SmoothNode& f, int k, const SmoothOptions& opt,
                               bool with_grad) {
  if (traj.empty()) throw StlError("smooth robustness of an empty trajectory");
  if (k < 0 || k >= static_cast<int>(traj.size())) throw StlError("evaluation slot outside the trajectory");
  Evaluator ev(traj, opt);
  std::vector<char> need(traj.size(), 0);
  need[k] = 1;
  const Cache c = ev.forward(f, need);
  SmoothResult r;
  r.value = c.value[k];
  if (with_grad) {
    r.grad.assign(param_count(f), 0.0);
    std::vector<double> dv(traj.size(), 0.0);
    dv[k] = 1.0;
    ev.backward(f, c, dv, r.grad.data());
  }
  return r;
}

SmoothResult smooth_robustness(const Trajectory& traj, const Formula& f, int k, double beta, double eta) {
  SmoothOptions opt;
  opt.beta = beta;
  opt.eta = eta;
  return smooth_robustness(traj, to_smooth(f), k, opt);
}

SmoothNode to_smooth(const Formula& f) {
  SmoothNode n;
  switch (f.op) {
    case Op::predicate:
      n.kind = SmoothKind::predicate;
      n.a = f.a;
      n.b = f.b;
      return n;
    case Op::conj:
    case Op::disj:
      n.kind = SmoothKind::boolean;
      n.p_kappa = f.op == Op::disj ? 1.0 : 0.0;
      n.p_w.assign(f.children.size(), 1.0);
      break;
    case Op::always:
    case Op::eventually:
      n.kind = SmoothKind::temporal;
      n.p_rho = f.op == Op::eventually ? 1.0 : 0.0;
      n.k1 = f.k1;
      n.k2 = f.k2;
      break;
  }
  for (const auto& c : f.children) n.children.push_back(to_smooth(c));
  return n;
}

Formula extract(const SmoothNode& f, double eta) {
  switch (f.kind) {
    case SmoothKind::predicate:
      return predicate(f.a, f.b);
    case SmoothKind::boolean: {
      const auto w = effective_w(f, true);
      std::vector<Formula> kids;
      for (std::size_t i = 0; i < f.children.size(); ++i)
        if (w[i] > 0.0) kids.push_back(extract(f.children[i], eta));
      return f.p_kappa >= 0.5 ? disj(std::move(kids)) : conj(std::move(kids));
    }
    case SmoothKind::temporal: {
      int k1 = static_cast<int>(std::ceil(f.k1 - 0.5 * eta - 1e-12));
      int k2 = static_cast<int>(std::floor(f.k2 + 0.5 * eta + 1e-12));
      k1 = std::max(k1, 0);
      k2 = std::max(k2, k1);
      Formula child = extract(f.children.front(), eta);
      return f.p_rho >= 0.5 ? eventually(k1, k2, std::move(child)) : always(k1, k2, std::move(child));
    }
  }
  return {};
}

}  // namespace spoofsim::stl
