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

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <string>

namespace stlcc {

enum class NodeKind : std::uint8_t {
  kTrue,
  kPredicate,
  kNot,
  kAnd,
  kOr,
  kEventually,
  kGlobally,
  kUntil,
};

// Direction of an atomic inequality: x_v >= c or x_v <= c. Only non-strict
// comparisons are representable.
enum class Direction : std::uint8_t { kGreaterEqual, kLessEqual };

inline Direction flip(Direction d) {
  return d == Direction::kGreaterEqual ? Direction::kLessEqual
                                       : Direction::kGreaterEqual;
}

// Temporal bounds are sample offsets relative to the evaluation time.
struct Interval {
  std::size_t lower = 0;
  std::size_t upper = 0;

  bool operator==(const Interval&) const = default;
};

// Immutable STL abstract syntax tree. Copies share structure, so a Formula is
// cheap to pass by value and safe to read from many threads.
class Formula {
 public:
  struct Node;

  // Defaults to `true`.
  Formula();

  static Formula truth();
  // Encoded as not(true).
  static Formula falsity();
  static Formula predicate(std::size_t var, Direction dir, double threshold);
  static Formula negation(Formula child);
  static Formula conjunction(Formula left, Formula right);
  static Formula disjunction(Formula left, Formula right);
  // The interval factories throw std::invalid_argument when lower > upper.
  static Formula eventually(Interval window, Formula child);
  static Formula globally(Interval window, Formula child);
  static Formula until(Interval window, Formula left, Formula right);

  NodeKind kind() const;

  // Predicate accessors; undefined for other kinds.
  std::size_t var() const;
  Direction direction() const;
  double threshold() const;

  // Temporal accessor; undefined for non-temporal kinds.
  Interval window() const;

  // Only child of Not/F/G, left operand of And/Or/U.
  Formula left() const;
  // Right operand of And/Or/U.
  Formula right() const;

  bool is_true() const { return kind() == NodeKind::kTrue; }
  bool is_false() const;
  bool is_temporal() const;

  // Number of AST nodes (>= 1).
  std::size_t size() const;
  // Longest root-to-leaf path counted in nodes; a lone predicate has depth 1.
  std::size_t depth() const;
  // Sum of nested upper interval bounds: the number of samples after the
  // evaluation time that the formula inspects.
  std::size_t horizon() const;
  // Distinct variable indices referenced by predicates.
  std::set<std::size_t> variables() const;

  // Structural equality (thresholds compared with ==).
  friend bool operator==(const Formula& a, const Formula& b);

 private:
  explicit Formula(std::shared_ptr<const Node> node);

  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  NodeKind kind = NodeKind::kTrue;
  std::size_t var = 0;
  Direction dir = Direction::kGreaterEqual;
  double threshold = 0.0;
  Interval window;
  std::shared_ptr<const Node> left;
  std::shared_ptr<const Node> right;
  std::size_t size = 1;
  std::size_t depth = 1;
  std::size_t horizon = 0;
};

// Pushes negations down to predicates: not(x >= c) becomes x <= c, F and G are
// dualized, And/Or swapped, double negations removed. not(true) is kept as the
// falsity constant and a negated Until is left as not(U) since the grammar has
// no Release operator.
Formula nnf(const Formula& phi);

}  // namespace stlcc
