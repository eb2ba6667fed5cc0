// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace spoofsim::stl {

// Features per slot, in grammar order x, y, v.
inline constexpr int kFeatures = 3;
using Coeffs = std::array<double, kFeatures>;

enum class Op { predicate, conj, disj, always, eventually };

// Immutable-by-convention AST node. Predicates read a . s_k - b.
struct Formula {
  Op op = Op::predicate;
  Coeffs a{0.0, 0.0, 0.0};
  double b = 0.0;
  int k1 = 0;
  int k2 = 0;
  std::vector<Formula> children;

  bool operator==(const Formula& o) const;
  bool operator!=(const Formula& o) const { return !(*this == o); }
};

class StlError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Formula predicate(const Coeffs& a, double b);
// Single-element lists collapse to that element.
Formula conj(std::vector<Formula> children);
Formula disj(std::vector<Formula> children);
Formula always(int k1, int k2, Formula child);
Formula eventually(int k1, int k2, Formula child);

// Negates every predicate and swaps the dual operators.
Formula negate(const Formula& f);

// Slots needed after the evaluation slot.
int horizon(const Formula& f);
int count_predicates(const Formula& f);
// Throws StlError on broken invariants (empty children, bad windows).
void validate(const Formula& f);

}  // namespace spoofsim::stl
