// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#include "spoofsim/stl/parse.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

namespace spoofsim::stl {

ParseError::ParseError(const std::string& msg, std::size_t pos)
    : StlError("parse error at column " + std::to_string(pos + 1) + ": " + msg), pos_(pos) {}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  Formula parse() {
    Formula f = disjunction();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, i_); }

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  bool accept(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  char peek() {
    skip();
    return i_ < s_.size() ? s_[i_] : '\0';
  }

  Formula disjunction() {
    std::vector<Formula> parts{conjunction()};
    while (accept('|')) parts.push_back(conjunction());
    return disj(std::move(parts));
  }

  Formula conjunction() {
    std::vector<Formula> parts{unary()};
    while (accept('&')) parts.push_back(unary());
    return conj(std::move(parts));
  }

  Formula unary() {
    const char c = peek();
    if (c == 'G' || c == 'F') {
      ++i_;
      expect('[');
      const std::size_t at = i_;
      const int k1 = integer();
      expect(',');
      const int k2 = integer();
      expect(']');
      if (k2 < k1) throw ParseError("window bounds reversed", at);
      expect('(');
      Formula child = disjunction();
      expect(')');
      return c == 'G' ? always(k1, k2, std::move(child)) : eventually(k1, k2, std::move(child));
    }
    if (c == '(') {
      ++i_;
      Formula inner = disjunction();
      expect(')');
      return inner;
    }
    return affine();
  }

  int integer() {
    skip();
    const std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (start == i_) fail("expected a non-negative integer window bound");
    if (i_ < s_.size() && (s_[i_] == '.' || s_[i_] == 'e' || s_[i_] == 'E'))
      throw ParseError("window bounds must be integers", start);
    int v = 0;
    auto [p, ec] = std::from_chars(s_.data() + start, s_.data() + i_, v);
    if (ec != std::errc()) throw ParseError("window bound out of range", start);
    return v;
  }

  bool number_start() {
    const char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
  }

  double number() {
    skip();
    const std::size_t start = i_;
    double v = 0.0;
    auto [p, ec] = std::from_chars(s_.data() + i_, s_.data() + s_.size(), v);
    if (ec != std::errc() || p == s_.data() + start) fail("expected a number");
    i_ = static_cast<std::size_t>(p - s_.data());
    return v;
  }

  int feature() {
    const char c = peek();
    int idx = c == 'x' ? 0 : c == 'y' ? 1 : c == 'v' ? 2 : -1;
    if (idx < 0) return -1;
    // Features are single letters; reject identifiers like "xy".
    if (i_ + 1 < s_.size() && std::isalnum(static_cast<unsigned char>(s_[i_ + 1])))
      fail("unknown feature name");
    ++i_;
    return idx;
  }

  // affine '>' number, normalized to a . s - b > 0.
  Formula affine() {
    Coeffs a{0.0, 0.0, 0.0};
    double constant = 0.0;
    bool first = true;
    for (;;) {
      double sign = 1.0;
      if (accept('-')) {
        sign = -1.0;
      } else if (!first) {
        if (!accept('+')) break;
      } else {
        accept('+');
      }
      first = false;
      if (number_start()) {
        const double v = sign * number();
        if (accept('*')) {
          const int f = feature();
          if (f < 0) fail("expected feature x, y or v");
          a[f] += v;
        } else {
          constant += v;
        }
      } else {
        const int f = feature();
        if (f < 0) fail("expected a number or feature x, y or v");
        a[f] += sign;
      }
      const char nxt = peek();
      if (nxt != '+' && nxt != '-') break;
    }
    expect('>');
    double sign = 1.0;
    if (accept('-')) sign = -1.0;
    const double rhs = sign * number();
    // a.s + constant > rhs  <=>  a.s - (rhs - constant) > 0
    return predicate(a, rhs - constant);
  }

  const std::string& s_;
  std::size_t i_ = 0;
};

std::string num(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

void emit(const Formula& f, std::string& out, bool parenthesize_nary) {
  switch (f.op) {
    case Op::predicate: {
      static const char* names[kFeatures] = {"x", "y", "v"};
      bool any = false;
      auto term = [&](double c, const std::string& body) {
        if (c == 0.0) return;
        if (!any) {
          out += num(c) + body;
        } else {
          out += c < 0 ? " - " : " + ";
          out += num(std::abs(c)) + body;
        }
        any = true;
      };
      for (int i = 0; i < kFeatures; ++i) term(f.a[i], std::string("*") + names[i]);
      term(-f.b, "");
      if (!any) out += "0";
      out += " > 0";
      return;
    }
    case Op::conj:
    case Op::disj: {
      if (parenthesize_nary) out += "(";
      const char* sep = f.op == Op::conj ? " & " : " | ";
      for (std::size_t i = 0; i < f.children.size(); ++i) {
        if (i) out += sep;
        const Formula& c = f.children[i];
        emit(c, out, c.op == Op::conj || c.op == Op::disj);
      }
      if (parenthesize_nary) out += ")";
      return;
    }
    case Op::always:
    case Op::eventually:
      out += f.op == Op::always ? "G[" : "F[";
      out += std::to_string(f.k1) + "," + std::to_string(f.k2) + "](";
      emit(f.children.front(), out, false);
      out += ")";
      return;
  }
}

}  // namespace

Formula parse_formula(const std::string& text) {
  for (std::size_t i = 0; i < text.size(); ++i)
    if (static_cast<unsigned char>(text[i]) > 127) throw ParseError("non-ASCII character", i);
  return Parser(text).parse();
}

std::string format_formula(const Formula& f) {
  std::string out;
  emit(f, out, false);
  return out;
}

std::vector<Formula> read_formula_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StlError("cannot open formula file " + path);
  std::vector<Formula> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      out.push_back(parse_formula(line));
    } catch (const ParseError& e) {
      throw StlError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void write_formula_file(const std::string& path, const std::vector<Formula>& formulas) {
  std::ofstream out(path);
  if (!out) throw StlError("cannot write formula file " + path);
  for (const auto& f : formulas) out << format_formula(f) << "\n";
}

}  // namespace spoofsim::stl
