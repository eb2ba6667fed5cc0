// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "spoofsim/stl/formula.hpp"
#include "spoofsim/stl/parse.hpp"
#include "spoofsim/stl/robustness.hpp"
#include "spoofsim/stl/smooth.hpp"

using namespace spoofsim;
using namespace spoofsim::stl;

namespace {

// Second implementation: enumerate the satisfaction margin directly from the definition,
// going through explicit index sets instead of the recursive evaluator.
double brute(const Trajectory& s, const Formula& f, int k) {
  std::vector<double> vals;
  switch (f.op) {
    case Op::predicate: {
      const auto& p = s.at(k);
      return f.a[0] * p.x + f.a[1] * p.y + f.a[2] * p.v - f.b;
    }
    case Op::conj:
    case Op::disj:
      for (const auto& c : f.children) vals.push_back(brute(s, c, k));
      break;
    case Op::always:
    case Op::eventually:
      for (int j = k + f.k1; j <= k + f.k2; ++j) vals.push_back(brute(s, f.children[0], j));
      break;
  }
  std::sort(vals.begin(), vals.end());
  const bool take_max = f.op == Op::disj || f.op == Op::eventually;
  return take_max ? vals.back() : vals.front();
}

Formula random_formula(std::mt19937_64& rng, int depth, bool integer_coeffs = false) {
  std::uniform_int_distribution<int> kind(0, depth <= 0 ? 0 : 4);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_int_distribution<int> small(-4, 4);
  auto c = [&] { return integer_coeffs ? double(small(rng)) : coef(rng); };
  switch (kind(rng)) {
    case 1:
    case 2: {
      std::uniform_int_distribution<int> nkids(2, 3);
      std::vector<Formula> kids;
      for (int i = nkids(rng); i > 0; --i) kids.push_back(random_formula(rng, depth - 1, integer_coeffs));
      return kind(rng) % 2 ? conj(std::move(kids)) : disj(std::move(kids));
    }
    case 3:
    case 4: {
      std::uniform_int_distribution<int> k1d(0, 3), len(0, 3);
      const int k1 = k1d(rng);
      const int k2 = k1 + len(rng);
      auto child = random_formula(rng, depth - 1, integer_coeffs);
      return std::uniform_int_distribution<int>(0, 1)(rng) ? always(k1, k2, std::move(child))
                                                          : eventually(k1, k2, std::move(child));
    }
    default: {
      Coeffs a{c(), c(), c()};
      // Sparse predicates exercise the printer's term dropping.
      for (auto& x : a)
        if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) x = 0.0;
      return predicate(a, c());
    }
  }
}

Trajectory random_traj(std::mt19937_64& rng, int K) {
  std::normal_distribution<double> n(0.0, 3.0);
  Trajectory t(K);
  for (auto& s : t) s = {n(rng), n(rng), n(rng)};
  return t;
}

SmoothNode random_smooth(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.15, 0.85), coef(-1.0, 1.0), win(0.2, 0.8);
  SmoothNode root;
  root.kind = SmoothKind::boolean;
  root.p_kappa = u(rng);
  for (int i = 0; i < 3; ++i) {
    SmoothNode pred;
    pred.a = {coef(rng), coef(rng), coef(rng)};
    pred.b = coef(rng);
    SmoothNode temp;
    temp.kind = SmoothKind::temporal;
    temp.p_rho = u(rng);
    // Non-integer bounds keep the window ramps differentiable.
    temp.k1 = i + win(rng);
    temp.k2 = temp.k1 + 2.0 + win(rng);
    temp.children.push_back(pred);
    root.children.push_back(temp);
    root.p_w.push_back(u(rng));
  }
  return root;
}

}  // namespace

TEST_CASE("predicate robustness is the affine margin") {
  Trajectory t{{0.0, 0.0, 5.0}};
  CHECK(robustness(t, predicate({0, 0, 1}, 0), 0) == doctest::Approx(5.0));
}

TEST_CASE("windowed affine predicate on the zero trajectory") {
  const Formula f = parse_formula("G[30,31](0.4111*x - 0.3976*y + 3.8745 > 0)");
  CHECK(f.op == Op::always);
  CHECK(f.k1 == 30);
  CHECK(f.k2 == 31);
  Trajectory zero(67);
  CHECK(robustness(zero, f, 0) == doctest::Approx(3.8745).epsilon(1e-12));
}

TEST_CASE("two-branch formula parses as a conjunction") {
  const Formula f =
      parse_formula("F[0,1](-0.4278*x + 0.1899*y - 3.2133 > 0) & G[35,36](0.1*x - 0.2*v + 1 > 0)");
  REQUIRE(f.op == Op::conj);
  REQUIRE(f.children.size() == 2);
  CHECK(f.children[0].op == Op::eventually);
  CHECK(f.children[1].op == Op::always);
  CHECK(f.children[0].children[0].a[0] == -0.4278);
  CHECK(f.children[0].children[0].b == doctest::Approx(3.2133));
}

TEST_CASE("parser reports positions and rejects bad windows") {
  CHECK_THROWS_AS(parse_formula("G[3,1](x > 0)"), ParseError);
  CHECK_THROWS_AS(parse_formula("G[1.5,2](x > 0)"), ParseError);
  CHECK_THROWS_AS(parse_formula("x > 0 &"), ParseError);
  CHECK_THROWS_AS(parse_formula("z > 0"), ParseError);
  try {
    parse_formula("x + > 0");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
}

TEST_CASE("canonical text form") {
  CHECK(format_formula(parse_formula("  x+2*y>1")) == "1*x + 2*y - 1 > 0");
  CHECK(format_formula(parse_formula("G[1,2]( v > -3 ) | (x > 0 & y > 0)")) ==
        "G[1,2](1*v + 3 > 0) | (1*x > 0 & 1*y > 0)");
  CHECK(format_formula(predicate({0, 0, 0}, 0)) == "0 > 0");
  const std::string canon = "F[0,4](0.5*x - 0.25*v + 1e-07 > 0)";
  CHECK(format_formula(parse_formula(canon)) == canon);
}

TEST_CASE("grammar round trip on random trees") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const Formula f = random_formula(rng, 4);
    const std::string text = format_formula(f);
    const Formula g = parse_formula(text);
    REQUIRE_MESSAGE(g == f, text);
    CHECK(format_formula(g) == text);
  }
}

TEST_CASE("exact robustness matches the brute-force oracle") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const Formula f = random_formula(rng, 3);
    const int K = horizon(f) + 1 + static_cast<int>(rng() % 4);
    const Trajectory t = random_traj(rng, K);
    const int k = static_cast<int>(rng() % (K - horizon(f)));
    REQUIRE(robustness(t, f, k) == brute(t, f, k));
    const auto tr = robustness_trace(t, f);
    CHECK(tr[k] == brute(t, f, k));
  }
}

TEST_CASE("out-of-range windows name the operator path") {
  const Formula f = conj({predicate({1, 0, 0}, 0), always(5, 9, predicate({0, 1, 0}, 0))});
  Trajectory t(6);
  try {
    robustness(t, f, 0);
    FAIL("expected an error");
  } catch (const StlError& e) {
    CHECK(std::string(e.what()).find("root/&[1]/G[5,9]") != std::string::npos);
  }
  CHECK(std::isnan(robustness_trace(t, f)[0]));
}

TEST_CASE("satisfaction boundary is inclusive") {
  Trajectory t{{1.0, 0.0, 0.0}};
  CHECK(satisfies(t, predicate({1, 0, 0}, 1.0)));
  CHECK_FALSE(satisfies(t, predicate({1, 0, 0}, 1.0 + 1e-12)));
}

TEST_CASE("duality under predicate negation") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    const Formula f = random_formula(rng, 3);
    const Trajectory t = random_traj(rng, horizon(f) + 2);
    CHECK(robustness(t, negate(f), 0) == -robustness(t, f, 0));
    const Formula g = random_formula(rng, 2);
    const Trajectory u = random_traj(rng, std::max(horizon(f), horizon(g)) + 1);
    CHECK(robustness(u, conj({f, g}), 0) == -robustness(u, disj({negate(f), negate(g)}), 0));
  }
}

TEST_CASE("singleton window equals the child at that slot") {
  std::mt19937_64 rng(5);
  const Trajectory t = random_traj(rng, 10);
  const Formula p = predicate({0.3, -1.0, 0.5}, 0.2);
  for (int k = 0; k < 10; ++k) CHECK(robustness(t, always(k, k, p), 0) == robustness(t, p, k));
}

TEST_CASE("robustness is monotone in predicate values") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> bump(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    Formula f = random_formula(rng, 3);
    const Trajectory t = random_traj(rng, horizon(f) + 1);
    const double before = robustness(t, f, 0);
    // Lowering every offset b raises every predicate value.
    std::function<void(Formula&)> lift = [&](Formula& g) {
      if (g.op == Op::predicate) g.b -= bump(rng);
      for (auto& c : g.children) lift(c);
    };
    lift(f);
    CHECK(robustness(t, f, 0) >= before);
  }
}

TEST_CASE("misclassification rate") {
  std::mt19937_64 rng(2);
  std::vector<Trajectory> data;
  std::vector<bool> labels;
  for (int i = 0; i < 40; ++i) {
    Trajectory t = random_traj(rng, 3);
    t[0].x = i < 25 ? 1.0 + i : -1.0 - i;
    data.push_back(t);
    labels.push_back(i < 25);
  }
  CHECK(misclassification_rate(data, labels, predicate({0, 0, 0}, -1)) == doctest::Approx(15.0 / 40.0));
  CHECK(misclassification_rate(data, labels, predicate({1, 0, 0}, 0)) == 0.0);
  CHECK_THROWS_AS(misclassification_rate({}, {}, predicate({1, 0, 0}, 0)), StlError);
}

TEST_CASE("batch robustness matches serial evaluation") {
  std::mt19937_64 rng(4);
  const Formula f = random_formula(rng, 3);
  std::vector<Trajectory> data;
  for (int i = 0; i < 200; ++i) data.push_back(random_traj(rng, horizon(f) + 1));
  CHECK(batch_robustness(data, f, Exec::serial) == batch_robustness(data, f, Exec::parallel));
}

TEST_CASE("soft time window") {
  std::vector<double> got;
  for (int n = 0; n < 6; ++n) got.push_back(window_weight(n, 2, 4, 0.1));
  CHECK(got == std::vector<double>{0, 0, 1, 1, 1, 0});
  CHECK(window_weight(1.95, 2, 4, 0.1) == doctest::Approx(0.5));
}

TEST_CASE("smooth semantics on well separated values") {
  // Values 0, 1, 2, 3 at slots 0..3.
  Trajectory t{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}};
  const Formula f = eventually(0, 3, predicate({1, 0, 0}, 0));
  const double exact = robustness(t, f, 0);
  const double smooth = smooth_robustness(t, f, 0, 50.0).value;
  CHECK(std::abs(smooth - exact) <= std::exp(-25.0) * 3.0);
  const Formula g = always(0, 3, predicate({1, 0, 0}, 0));
  CHECK(std::abs(smooth_robustness(t, g, 0, 50.0).value - robustness(t, g, 0)) <= std::exp(-25.0) * 3.0);
}

TEST_CASE("smooth robustness approaches exact as temperature grows") {
  // One operator over predicates: the softmax average moves toward the max as beta grows
  // (its beta-derivative is a weighted variance), so the error never increases.
  std::mt19937_64 rng(21);
  for (int i = 0; i < 300; ++i) {
    const Formula f = random_formula(rng, 1);
    const Trajectory t = random_traj(rng, horizon(f) + 1);
    const double exact = robustness(t, f, 0);
    double prev = std::numeric_limits<double>::infinity();
    for (double beta : {1.0, 10.0, 100.0}) {
      const double err = std::abs(smooth_robustness(t, f, 0, beta).value - exact);
      CHECK(err <= prev + 1e-12);
      prev = err;
    }
  }
  // Nested soft max/min can cancel errors at moderate beta, so only the end points are ordered
  // and step-wise violations must stay rare.
  int violations = 0;
  const int trials = 500;
  for (int i = 0; i < trials; ++i) {
    const Formula f = random_formula(rng, 3);
    const Trajectory t = random_traj(rng, horizon(f) + 1);
    const double exact = robustness(t, f, 0);
    double err[3];
    int j = 0;
    for (double beta : {1.0, 10.0, 100.0}) err[j++] = std::abs(smooth_robustness(t, f, 0, beta).value - exact);
    CHECK(err[2] <= err[0] + 1e-12);
    if (err[1] > err[0] + 1e-12 || err[2] > err[1] + 1e-12) ++violations;
  }
  CHECK(violations <= trials / 100);
}

TEST_CASE("smooth gradients match central differences") {
  std::mt19937_64 rng(13);
  int checked[3] = {0, 0, 0};
  for (int trial = 0; trial < 30; ++trial) {
    const SmoothNode f = random_smooth(rng);
    std::normal_distribution<double> n(0.0, 1.0);
    Trajectory t(10);
    for (auto& s : t) s = {n(rng), n(rng), n(rng)};
    SmoothOptions opt;
    opt.beta = 2.0;
    opt.eta = 0.5;
    const auto res = smooth_robustness(t, f, 0, opt);
    const auto params = flatten(f);
    const auto groups = param_groups(f);
    REQUIRE(res.grad.size() == params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double h = 1e-6;
      auto plus = params, minus = params;
      plus[i] += h;
      minus[i] -= h;
      SmoothNode fp = f, fm = f;
      unflatten(fp, plus);
      unflatten(fm, minus);
      const double fd =
          (smooth_robustness(t, fp, 0, opt, false).value - smooth_robustness(t, fm, 0, opt, false).value) / (2 * h);
      const double scale = std::max({std::abs(fd), std::abs(res.grad[i]), 1e-3});
      CHECK_MESSAGE(std::abs(fd - res.grad[i]) / scale <= 1e-4, "param " << i);
      ++checked[static_cast<int>(groups[i])];
    }
  }
  CHECK(checked[0] > 0);
  CHECK(checked[1] > 0);
  CHECK(checked[2] > 0);
}

TEST_CASE("discrete formulas survive the smooth round trip") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) {
    const Formula f = random_formula(rng, 3);
    CHECK(extract(to_smooth(f), 0.1) == f);
  }
}

TEST_CASE("hard selectors follow the maximum likelihood draw") {
  SmoothNode root;
  root.kind = SmoothKind::boolean;
  root.p_kappa = 0.7;
  root.p_w = {0.2, 0.9, 0.1};
  for (double b : {0.0, 1.0, 2.0}) {
    SmoothNode p;
    p.a = {1, 0, 0};
    p.b = b;
    root.children.push_back(p);
  }
  const Formula f = extract(root, 0.1);
  CHECK(f == predicate({1, 0, 0}, 1.0));
  SmoothOptions opt;
  opt.hard_selectors = true;
  Trajectory t{{4.0, 0, 0}};
  CHECK(smooth_robustness(t, root, 0, opt).value == doctest::Approx(3.0));
  root.p_w = {0.9, 0.9, 0.1};
  CHECK(extract(root, 0.1).op == Op::disj);
}
