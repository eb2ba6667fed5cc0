// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#include "spoofsim/stl/formula.hpp"

#include <algorithm>

namespace spoofsim::stl {

bool Formula::operator==(const Formula& o) const {
  if (op != o.op) return false;
  switch (op) {
    case Op::predicate: return a == o.a && b == o.b;
    case Op::always:
    case Op::eventually:
      if (k1 != o.k1 || k2 != o.k2) return false;
      break;
    default: break;
  }
  return children == o.children;
}

Formula predicate(const Coeffs& a, double b) {
  Formula f;
  f.op = Op::predicate;
  f.a = a;
  f.b = b;
  return f;
}

namespace {
Formula nary(Op op, std::vector<Formula> children) {
  if (children.empty()) throw StlError("Boolean operator needs at least one child");
  if (children.size() == 1) return std::move(children.front());
  Formula f;
  f.op = op;
  f.children = std::move(children);
  return f;
}

Formula temporal(Op op, int k1, int k2, Formula child) {
  if (k1 < 0 || k2 < k1) throw StlError("temporal window must satisfy 0 <= k1 <= k2");
  Formula f;
  f.op = op;
  f.k1 = k1;
  f.k2 = k2;
  f.children.push_back(std::move(child));
  return f;
}
}  // namespace

Formula conj(std::vector<Formula> children) { return nary(Op::conj, std::move(children)); }
Formula disj(std::vector<Formula> children) { return nary(Op::disj, std::move(children)); }
Formula always(int k1, int k2, Formula child) { return temporal(Op::always, k1, k2, std::move(child)); }
Formula eventually(int k1, int k2, Formula child) { return temporal(Op::eventually, k1, k2, std::move(child)); }

Formula negate(const Formula& f) {
  Formula g = f;
  switch (f.op) {
    case Op::predicate:
      for (auto& c : g.a) c = -c;
      g.b = -f.b;
      return g;
    case Op::conj: g.op = Op::disj; break;
    case Op::disj: g.op = Op::conj; break;
    case Op::always: g.op = Op::eventually; break;
    case Op::eventually: g.op = Op::always; break;
  }
  for (auto& c : g.children) c = negate(c);
  return g;
}

int horizon(const Formula& f) {
  int h = 0;
  for (const auto& c : f.children) h = std::max(h, horizon(c));
  if (f.op == Op::always || f.op == Op::eventually) h += f.k2;
  return h;
}

int count_predicates(const Formula& f) {
  if (f.op == Op::predicate) return 1;
  int n = 0;
  for (const auto& c : f.children) n += count_predicates(c);
  return n;
}

void validate(const Formula& f) {
  switch (f.op) {
    case Op::predicate:
      if (!f.children.empty()) throw StlError("predicate cannot have children");
      return;
    case Op::conj:
    case Op::disj:
      if (f.children.empty()) throw StlError("Boolean operator without children");
      break;
    case Op::always:
    case Op::eventually:
      if (f.children.size() != 1) throw StlError("temporal operator needs exactly one child");
      if (f.k1 < 0 || f.k2 < f.k1) throw StlError("temporal window must satisfy 0 <= k1 <= k2");
      break;
  }
  for (const auto& c : f.children) validate(c);
}

}  // namespace spoofsim::stl
