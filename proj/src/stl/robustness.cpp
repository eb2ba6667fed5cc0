// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#include "spoofsim/stl/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace spoofsim::stl {

Coeffs features(const VehicleState& s) { return {s.x, s.y, s.v}; }

namespace {

std::string label(const Formula& f) {
  switch (f.op) {
    case Op::predicate: return "pred";
    case Op::conj: return "&";
    case Op::disj: return "|";
    case Op::always: return "G[" + std::to_string(f.k1) + "," + std::to_string(f.k2) + "]";
    case Op::eventually: return "F[" + std::to_string(f.k1) + "," + std::to_string(f.k2) + "]";
  }
  return "?";
}

double eval(const Trajectory& s, const Formula& f, int k, const std::string& path) {
  const int K = static_cast<int>(s.size());
  switch (f.op) {
    case Op::predicate: {
      if (k < 0 || k >= K)
        throw StlError("slot " + std::to_string(k) + " outside trajectory of length " + std::to_string(K) +
                       " at " + path);
      const Coeffs x = features(s[k]);
      return f.a[0] * x[0] + f.a[1] * x[1] + f.a[2] * x[2] - f.b;
    }
    case Op::conj:
    case Op::disj: {
      double best = f.op == Op::conj ? std::numeric_limits<double>::infinity()
                                     : -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < f.children.size(); ++i) {
        const double r = eval(s, f.children[i], k, path + "/" + label(f) + "[" + std::to_string(i) + "]");
        best = f.op == Op::conj ? std::min(best, r) : std::max(best, r);
      }
      return best;
    }
    case Op::always:
    case Op::eventually: {
      const std::string here = path + "/" + label(f);
      if (k + f.k1 < 0 || k + f.k2 > K - 1)
        throw StlError("window [" + std::to_string(k + f.k1) + "," + std::to_string(k + f.k2) +
                       "] outside [0," + std::to_string(K - 1) + "] at " + here);
      double best = f.op == Op::always ? std::numeric_limits<double>::infinity()
                                       : -std::numeric_limits<double>::infinity();
      for (int j = k + f.k1; j <= k + f.k2; ++j) {
        const double r = eval(s, f.children.front(), j, here);
        best = f.op == Op::always ? std::min(best, r) : std::max(best, r);
      }
      return best;
    }
  }
  return 0.0;
}

// Bottom-up trace; entries whose windows do not fit stay NaN.
std::vector<double> trace(const Trajectory& s, const Formula& f) {
  const int K = static_cast<int>(s.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> out(K, nan);
  switch (f.op) {
    case Op::predicate:
      for (int k = 0; k < K; ++k) out[k] = f.a[0] * s[k].x + f.a[1] * s[k].y + f.a[2] * s[k].v - f.b;
      break;
    case Op::conj:
    case Op::disj: {
      out = trace(s, f.children.front());
      for (std::size_t i = 1; i < f.children.size(); ++i) {
        const auto c = trace(s, f.children[i]);
        for (int k = 0; k < K; ++k) {
          if (std::isnan(out[k]) || std::isnan(c[k])) {
            out[k] = nan;
          } else {
            out[k] = f.op == Op::conj ? std::min(out[k], c[k]) : std::max(out[k], c[k]);
          }
        }
      }
      break;
    }
    case Op::always:
    case Op::eventually: {
      const auto c = trace(s, f.children.front());
      for (int k = 0; k + f.k2 < K; ++k) {
        double best = f.op == Op::always ? std::numeric_limits<double>::infinity()
                                         : -std::numeric_limits<double>::infinity();
        for (int j = k + f.k1; j <= k + f.k2; ++j) {
          if (std::isnan(c[j])) {
            best = nan;
            break;
          }
          best = f.op == Op::always ? std::min(best, c[j]) : std::max(best, c[j]);
        }
        out[k] = best;
      }
      break;
    }
  }
  return out;
}

}  // namespace

double robustness(const Trajectory& traj, const Formula& f, int k) { return eval(traj, f, k, "root"); }

std::vector<double> robustness_trace(const Trajectory& traj, const Formula& f) { return trace(traj, f); }

bool satisfies(const Trajectory& traj, const Formula& f) { return robustness(traj, f, 0) >= 0.0; }

std::vector<double> batch_robustness(const std::vector<Trajectory>& data, const Formula& f, Exec exec) {
  const int n = static_cast<int>(data.size());
  std::vector<double> out(n);
  if (exec == Exec::serial) {
    for (int i = 0; i < n; ++i) out[i] = robustness(data[i], f, 0);
    return out;
  }
  // Exceptions cannot cross the parallel region; capture the first one.
  std::string error;
#pragma omp parallel for schedule(dynamic, 8)
  for (int i = 0; i < n; ++i) {
    try {
      out[i] = robustness(data[i], f, 0);
    } catch (const StlError& e) {
#pragma omp critical
      if (error.empty()) error = "sample " + std::to_string(i) + ": " + e.what();
    }
  }
  if (!error.empty()) throw StlError(error);
  return out;
}

double misclassification_rate(const std::vector<Trajectory>& data, const std::vector<bool>& in_class,
                              const Formula& f) {
  if (data.empty()) throw StlError("misclassification rate of an empty dataset");
  if (data.size() != in_class.size()) throw StlError("label count does not match dataset size");
  const auto r = batch_robustness(data, f);
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const bool sat = r[i] >= 0.0;
    if (sat != in_class[i]) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(r.size());
}

}  // namespace spoofsim::stl
