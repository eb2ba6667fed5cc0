// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#pragma once

#include <string>
#include <vector>

#include "spoofsim/stl/formula.hpp"

namespace spoofsim::stl {

// Text form, ASCII only:
//   formula   := conj ('|' conj)*
//   conj      := unary ('&' unary)*
//   unary     := ('G' | 'F') '[' int ',' int ']' '(' formula ')' | '(' formula ')' | predicate
//   predicate := affine '>' number
//   affine    := term (('+' | '-') term)*,  term := number ['*' feat] | feat,  feat := x | y | v
// Nested And/Or of the same kind keep their parentheses so the tree shape survives.
class ParseError : public StlError {
 public:
  ParseError(const std::string& msg, std::size_t pos);
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

Formula parse_formula(const std::string& text);
std::string format_formula(const Formula& f);

// One formula per line; blank lines and lines starting with '#' are skipped.
std::vector<Formula> read_formula_file(const std::string& path);
void write_formula_file(const std::string& path, const std::vector<Formula>& formulas);

}  // namespace spoofsim::stl
