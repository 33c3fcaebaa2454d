// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstring>
#include <random>
#include <string>

#include "doctest.h"
#include "stlcc/error.hpp"
#include "stlcc/formula.hpp"
#include "stlcc/monitor.hpp"
#include "stlcc/syntax.hpp"
#include "support/oracles.hpp"

using namespace stlcc;
using stlcc::testing::FormulaGen;
using stlcc::testing::oracle_robustness;
using stlcc::testing::random_trajectory;

namespace {

Trajectory example_signal() { return Trajectory::from_rows({{0.5, 0.1, 0.9}}); }

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_SUITE("syntax") {
  TEST_CASE("parses a globally predicate") {
    const Formula f = parse_formula("G[0,5](x0 >= 0.2)");
    CHECK(f == Formula::globally({0, 5}, Formula::predicate(0, Direction::kGreaterEqual, 0.2)));
  }

  TEST_CASE("not binds tighter than and") {
    const Formula f = parse_formula("not (x1 <= 0.0) and F[1,3](x0 >= 1.0)");
    const Formula expected = Formula::conjunction(
        Formula::negation(Formula::predicate(1, Direction::kLessEqual, 0.0)),
        Formula::eventually({1, 3}, Formula::predicate(0, Direction::kGreaterEqual, 1.0)));
    CHECK(f == expected);
  }

  TEST_CASE("and binds tighter than or") {
    const Formula f = parse_formula("x0 >= 1 or x0 <= 0 and true");
    CHECK(f.kind() == NodeKind::kOr);
    CHECK(f.right().kind() == NodeKind::kAnd);
  }

  TEST_CASE("until with a negated operand") {
    const Formula f = parse_formula("not ((x0 >= 0) U[0,2] (x0 >= 0.8))");
    REQUIRE(f.kind() == NodeKind::kNot);
    CHECK(f.left().kind() == NodeKind::kUntil);
  }

  TEST_CASE("reversed interval is rejected") {
    try {
      parse_formula("G[3,1](x0 >= 0)");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.message() == "interval lower bound exceeds upper bound");
      CHECK(e.line() == 1);
      CHECK(e.column() == 2);
    }
  }

  TEST_CASE("negative interval bound is rejected, negative threshold is not") {
    CHECK_THROWS_AS(parse_formula("F[-1,2](x0 >= 0)"), ParseError);
    CHECK(parse_formula("x0 >= -1.5").threshold() == -1.5);
    CHECK(parse_formula("x0 >= -1e6").threshold() == -1e6);
  }

  TEST_CASE("errors carry line and column") {
    try {
      parse_formula("x0 >= 1 and\n  (x1 <= )");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(e.column() == 10);
    }
    CHECK_THROWS_AS(parse_formula("x0 > 1"), ParseError);
    CHECK_THROWS_AS(parse_formula("y0 >= 1"), ParseError);
    CHECK_THROWS_AS(parse_formula("(x0 >= 1"), ParseError);
    CHECK_THROWS_AS(parse_formula("x0 >= 1 x0 <= 2"), ParseError);
    CHECK_THROWS_AS(parse_formula(""), ParseError);
  }

  TEST_CASE("canonical printing") {
    CHECK(to_string(Formula::predicate(0, Direction::kGreaterEqual, 0.2)) == "x0 >= 0.2");
    CHECK(to_string(Formula::negation(Formula::predicate(1, Direction::kLessEqual, 0))) ==
          "not (x1 <= 0)");
    CHECK(to_string(Formula::until({0, 2}, Formula::predicate(0, Direction::kGreaterEqual, 0),
                                   Formula::predicate(0, Direction::kGreaterEqual, 0.8))) ==
          "(x0 >= 0) U[0,2] (x0 >= 0.8)");
    CHECK(to_string(parse_formula("G[0,5]( x0>=0.2 )")) == "G[0,5](x0 >= 0.2)");
  }

  TEST_CASE("associativity is preserved by the printer") {
    const Formula a = Formula::predicate(0, Direction::kGreaterEqual, 1);
    const Formula b = Formula::predicate(1, Direction::kGreaterEqual, 2);
    const Formula c = Formula::predicate(2, Direction::kGreaterEqual, 3);
    const Formula right_nested = Formula::conjunction(a, Formula::conjunction(b, c));
    CHECK(to_string(right_nested) == "x0 >= 1 and (x1 >= 2 and x2 >= 3)");
    CHECK(parse_formula(to_string(right_nested)) == right_nested);
    const Formula mixed = Formula::conjunction(Formula::disjunction(a, b), c);
    CHECK(parse_formula(to_string(mixed)) == mixed);
  }

  TEST_CASE("parse(print(f)) == f for random formulae") {
    FormulaGen gen(7, 3, 8);
    std::normal_distribution<double> wild(0.0, 1e3);
    for (int i = 0; i < 1000; ++i) {
      const Formula f = gen(5);
      const std::string text = to_string(f);
      INFO(text);
      CHECK(parse_formula(text) == f);
    }
    for (int i = 0; i < 200; ++i) {
      const double c = wild(gen.rng()) * std::pow(10.0, i % 30 - 15);
      const Formula f = Formula::predicate(0, Direction::kLessEqual, c);
      CHECK(parse_formula(to_string(f)).threshold() == c);
    }
  }
}

TEST_SUITE("monitor") {
  TEST_CASE("worked examples") {
    const Trajectory x = example_signal();
    CHECK(robustness(parse_formula("x0 >= 0.2"), x) == doctest::Approx(0.3).epsilon(1e-15));
    // brute force: min(0.3, -0.1, 0.7)
    CHECK(robustness(parse_formula("G[0,2](x0 >= 0.2)"), x) == doctest::Approx(-0.1).epsilon(1e-12));
    // t'=0: min(-0.3, 0.5) ; t'=1: min(-0.7, 0.1) ; t'=2: min(0.1, 0.1)
    CHECK(robustness(parse_formula("(x0 >= 0) U[0,2] (x0 >= 0.8)"), x) ==
          doctest::Approx(0.1).epsilon(1e-12));
    CHECK(boolean_sat(parse_formula("F[0,2](x0 >= 0.8)"), x));
    CHECK_FALSE(boolean_sat(parse_formula("G[0,2](x0 >= 0.2)"), x));
    CHECK(boolean_sat(parse_formula("x0 >= 0.5"), x));
    CHECK(robustness(parse_formula("x0 >= 0.5"), x) == 0.0);
  }

  TEST_CASE("negation, conjunction and true") {
    const Trajectory x = example_signal();
    CHECK(robustness(parse_formula("not (x0 >= 0.2)"), x) == doctest::Approx(-0.3));
    CHECK(robustness(parse_formula("x0 >= 0.2 and x0 <= 0.4"), x) == doctest::Approx(-0.1));
    CHECK(robustness(parse_formula("x0 >= 0.2 or x0 <= 0.4"), x) == doctest::Approx(0.3));
    CHECK(robustness(Formula::truth(), x) == kLarge);
    CHECK(robustness(Formula::falsity(), x) == -kLarge);
  }

  TEST_CASE("out-of-horizon windows") {
    const Trajectory x = example_signal();
    // clipped to [1, 2]
    CHECK(robustness(parse_formula("F[1,9](x0 >= 0)"), x) == doctest::Approx(0.9));
    CHECK(robustness(parse_formula("F[3,9](x0 >= 0)"), x) == -kLarge);
    CHECK(robustness(parse_formula("G[3,9](x0 >= 0)"), x) == kLarge);
    CHECK(robustness(parse_formula("(x0 >= 0) U[3,9] (x0 >= 0)"), x) == -kLarge);
    CHECK_FALSE(boolean_sat(parse_formula("F[3,9](x0 >= 0)"), x));
    CHECK(boolean_sat(parse_formula("G[3,9](x0 >= 0)"), x));
  }

  TEST_CASE("evaluation errors") {
    const Trajectory x = example_signal();
    CHECK_THROWS_AS(robustness(parse_formula("x1 >= 0"), x), EvaluationError);
    CHECK_THROWS_AS(robustness(parse_formula("x0 >= 0"), x, 3), EvaluationError);
    CHECK_THROWS_AS(boolean_sat(parse_formula("x2 >= 0"), x), EvaluationError);
    CHECK(robustness(parse_formula("x0 >= 0"), x, 2) == doctest::Approx(0.9));
  }

  TEST_CASE("sliding window extrema match direct loops") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> len(1, 40), bound(0, 45);
    std::normal_distribution<double> val(0, 1);
    for (int i = 0; i < 300; ++i) {
      std::vector<double> v(len(rng));
      for (double& e : v) e = std::round(val(rng) * 4) / 4;  // force ties
      std::size_t lo = bound(rng), hi = bound(rng);
      if (lo > hi) std::swap(lo, hi);
      const auto mn = sliding_min(v, {lo, hi});
      const auto mx = sliding_max(v, {lo, hi});
      for (std::size_t t = 0; t < v.size(); ++t) {
        double emin = kLarge, emax = -kLarge;
        for (std::size_t s = t + lo; s <= t + hi && s < v.size(); ++s) {
          emin = s == t + lo ? v[s] : std::min(emin, v[s]);
          emax = s == t + lo ? v[s] : std::max(emax, v[s]);
        }
        CHECK(mn[t] == emin);
        CHECK(mx[t] == emax);
      }
    }
  }

  TEST_CASE("trace evaluator agrees with the pointwise oracle") {
    FormulaGen gen(3, 2, 6);
    for (int i = 0; i < 300; ++i) {
      const Formula f = gen(4);
      const Trajectory tau = random_trajectory(gen.rng(), 2, 15);
      const auto trace = robustness_trace(f, tau, EvalMode::kNaive);
      for (std::size_t t = 0; t < tau.length(); ++t) {
        INFO(to_string(f), " t=", t);
        CHECK(trace[t] == oracle_robustness(f, tau, t));
      }
    }
  }

  TEST_CASE("conjunction is exactly the min of its operands") {
    FormulaGen gen(5, 2, 10);
    for (int i = 0; i < 300; ++i) {
      const Formula a = gen(3), b = gen(3);
      const Trajectory tau = random_trajectory(gen.rng(), 2, 30);
      CHECK(robustness(Formula::conjunction(a, b), tau) ==
            std::min(robustness(a, tau), robustness(b, tau)));
      CHECK(robustness(Formula::disjunction(a, b), tau) ==
            std::max(robustness(a, tau), robustness(b, tau)));
    }
  }

  TEST_CASE("eventually is the window max of its operand") {
    FormulaGen gen(9, 1, 10);
    std::uniform_int_distribution<std::size_t> bound(0, 12);
    for (int i = 0; i < 200; ++i) {
      const Formula child = gen(3);
      std::size_t a = bound(gen.rng()), b = bound(gen.rng());
      if (a > b) std::swap(a, b);
      const Trajectory tau = random_trajectory(gen.rng(), 1, 30);
      const auto inner = robustness_trace(child, tau);
      const auto outer = robustness_trace(Formula::eventually({a, b}, child), tau);
      for (std::size_t t = 0; t + b < tau.length(); ++t) {
        double expected = inner[t + a];
        for (std::size_t s = t + a; s <= t + b; ++s) expected = std::max(expected, inner[s]);
        CHECK(outer[t] == expected);
      }
    }
  }

  TEST_CASE("sign of robustness agrees with Boolean semantics") {
    FormulaGen gen(13, 2, 8);
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
      const Formula f = gen(4);
      const Trajectory tau = random_trajectory(gen.rng(), 2, 50);
      const double r = robustness(f, tau);
      if (r == 0.0) continue;
      ++checked;
      INFO(to_string(f));
      CHECK((r > 0) == boolean_sat(f, tau));
    }
    CHECK(checked > 900);
  }

  TEST_CASE("sliding-window path is bit-identical to the naive path") {
    FormulaGen gen(17, 2, 12);
    for (int i = 0; i < 500; ++i) {
      const Formula f = gen(4);
      const Trajectory tau = random_trajectory(gen.rng(), 2, 40);
      const auto naive = robustness_trace(f, tau, EvalMode::kNaive);
      const auto fast = robustness_trace(f, tau, EvalMode::kSlidingWindow);
      REQUIRE(naive.size() == fast.size());
      for (std::size_t t = 0; t < naive.size(); ++t) CHECK(same_bits(naive[t], fast[t]));
    }
  }
}

TEST_SUITE("nnf") {
  TEST_CASE("dualities") {
    const Formula p = Formula::predicate(0, Direction::kGreaterEqual, 0.2);
    CHECK(nnf(Formula::negation(p)) == Formula::predicate(0, Direction::kLessEqual, 0.2));
    CHECK(nnf(Formula::negation(Formula::globally({0, 5}, p))) ==
          Formula::eventually({0, 5}, Formula::predicate(0, Direction::kLessEqual, 0.2)));
    const Formula g = parse_formula("F[1,4](x0 >= 1 or x1 <= 2)");
    CHECK(nnf(Formula::negation(Formula::negation(g))) == g);
    CHECK(nnf(Formula::negation(Formula::truth())).is_false());
    CHECK(nnf(Formula::negation(Formula::falsity())).is_true());
  }

  TEST_CASE("negated until stays opaque") {
    const Formula u = parse_formula("(not (x0 >= 0)) U[0,2] (x0 >= 0.8)");
    const Formula n = nnf(Formula::negation(u));
    REQUIRE(n.kind() == NodeKind::kNot);
    CHECK(n.left() == parse_formula("(x0 <= 0) U[0,2] (x0 >= 0.8)"));
  }

  TEST_CASE("nnf(not f) has exactly the negated robustness") {
    FormulaGen gen(23, 2, 8);
    for (int i = 0; i < 500; ++i) {
      const Formula f = gen(4, false);
      const Formula n = nnf(Formula::negation(f));
      const Trajectory tau = random_trajectory(gen.rng(), 2, 30);
      const auto lhs = robustness_trace(n, tau);
      const auto rhs = robustness_trace(f, tau);
      for (std::size_t t = 0; t < lhs.size(); ++t) CHECK(lhs[t] == -rhs[t]);
    }
  }

  TEST_CASE("nnf leaves negation only on true and until") {
    FormulaGen gen(29, 2, 8);
    for (int i = 0; i < 300; ++i) {
      const Formula n = nnf(gen(5));
      std::vector<Formula> stack{n};
      while (!stack.empty()) {
        const Formula f = stack.back();
        stack.pop_back();
        if (f.kind() == NodeKind::kNot) {
          CHECK((f.left().is_true() || f.left().kind() == NodeKind::kUntil));
        }
        if (f.kind() != NodeKind::kTrue && f.kind() != NodeKind::kPredicate) {
          stack.push_back(f.left());
          if (f.kind() == NodeKind::kAnd || f.kind() == NodeKind::kOr ||
              f.kind() == NodeKind::kUntil) {
            stack.push_back(f.right());
          }
        }
      }
    }
  }
}

TEST_SUITE("formula") {
  TEST_CASE("size, depth, horizon and variables") {
    const Formula f = parse_formula("F[1,3](G[0,4](x0 >= 1)) and (x2 <= 0) U[2,5] (x1 >= 0)");
    CHECK(f.size() == 7);
    CHECK(f.depth() == 4);
    CHECK(f.horizon() == 7);
    CHECK(f.variables() == std::set<std::size_t>{0, 1, 2});
    CHECK(Formula().size() == 1);
    CHECK_THROWS_AS(Formula::eventually({3, 1}, Formula()), std::invalid_argument);
  }
}
