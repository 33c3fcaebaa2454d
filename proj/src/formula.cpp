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

#include "stlcc/formula.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace stlcc {
namespace {

using NodePtr = std::shared_ptr<const Formula::Node>;

const NodePtr& true_node() {
  static const NodePtr node = std::make_shared<const Formula::Node>();
  return node;
}

void check_window(Interval w) {
  if (w.lower > w.upper) {
    throw std::invalid_argument("interval lower bound exceeds upper bound");
  }
}

bool equal_nodes(const Formula::Node* a, const Formula::Node* b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->size != b->size) return false;
  switch (a->kind) {
    case NodeKind::kTrue:
      return true;
    case NodeKind::kPredicate:
      return a->var == b->var && a->dir == b->dir && a->threshold == b->threshold;
    case NodeKind::kNot:
      return equal_nodes(a->left.get(), b->left.get());
    case NodeKind::kEventually:
    case NodeKind::kGlobally:
      return a->window == b->window && equal_nodes(a->left.get(), b->left.get());
    case NodeKind::kUntil:
      if (a->window != b->window) return false;
      [[fallthrough]];
    case NodeKind::kAnd:
    case NodeKind::kOr:
      return equal_nodes(a->left.get(), b->left.get()) &&
             equal_nodes(a->right.get(), b->right.get());
  }
  return false;
}

void collect_variables(const Formula::Node* n, std::set<std::size_t>& out) {
  if (n->kind == NodeKind::kPredicate) out.insert(n->var);
  if (n->left) collect_variables(n->left.get(), out);
  if (n->right) collect_variables(n->right.get(), out);
}

}  // namespace

Formula::Formula() : node_(true_node()) {}

Formula::Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Formula Formula::truth() { return Formula(); }

Formula Formula::falsity() { return negation(truth()); }

Formula Formula::predicate(std::size_t var, Direction dir, double threshold) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::kPredicate;
  n->var = var;
  n->dir = dir;
  n->threshold = threshold;
  return Formula(std::move(n));
}

Formula Formula::negation(Formula child) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::kNot;
  n->size = child.node_->size + 1;
  n->depth = child.node_->depth + 1;
  n->horizon = child.node_->horizon;
  n->left = std::move(child.node_);
  return Formula(std::move(n));
}

namespace {

std::shared_ptr<Formula::Node> binary(NodeKind kind, const NodePtr& l,
                                      const NodePtr& r) {
  auto n = std::make_shared<Formula::Node>();
  n->kind = kind;
  n->size = l->size + r->size + 1;
  n->depth = std::max(l->depth, r->depth) + 1;
  n->horizon = std::max(l->horizon, r->horizon);
  n->left = l;
  n->right = r;
  return n;
}

}  // namespace

Formula Formula::conjunction(Formula left, Formula right) {
  return Formula(binary(NodeKind::kAnd, left.node_, right.node_));
}

Formula Formula::disjunction(Formula left, Formula right) {
  return Formula(binary(NodeKind::kOr, left.node_, right.node_));
}

Formula Formula::eventually(Interval window, Formula child) {
  check_window(window);
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::kEventually;
  n->window = window;
  n->size = child.node_->size + 1;
  n->depth = child.node_->depth + 1;
  n->horizon = child.node_->horizon + window.upper;
  n->left = std::move(child.node_);
  return Formula(std::move(n));
}

Formula Formula::globally(Interval window, Formula child) {
  Formula f = eventually(window, std::move(child));
  auto n = std::make_shared<Node>(*f.node_);
  n->kind = NodeKind::kGlobally;
  return Formula(std::move(n));
}

Formula Formula::until(Interval window, Formula left, Formula right) {
  check_window(window);
  auto n = binary(NodeKind::kUntil, left.node_, right.node_);
  n->window = window;
  n->horizon += window.upper;
  return Formula(std::move(n));
}

NodeKind Formula::kind() const { return node_->kind; }
std::size_t Formula::var() const { return node_->var; }
Direction Formula::direction() const { return node_->dir; }
double Formula::threshold() const { return node_->threshold; }
Interval Formula::window() const { return node_->window; }
Formula Formula::left() const { return Formula(node_->left); }
Formula Formula::right() const { return Formula(node_->right); }

bool Formula::is_false() const {
  return node_->kind == NodeKind::kNot && node_->left->kind == NodeKind::kTrue;
}

bool Formula::is_temporal() const {
  const auto k = node_->kind;
  return k == NodeKind::kEventually || k == NodeKind::kGlobally ||
         k == NodeKind::kUntil;
}

std::size_t Formula::size() const { return node_->size; }
std::size_t Formula::depth() const { return node_->depth; }
std::size_t Formula::horizon() const { return node_->horizon; }

std::set<std::size_t> Formula::variables() const {
  std::set<std::size_t> out;
  collect_variables(node_.get(), out);
  return out;
}

bool operator==(const Formula& a, const Formula& b) {
  return equal_nodes(a.node_.get(), b.node_.get());
}

namespace {

Formula negated_nnf(const Formula& phi);

Formula positive_nnf(const Formula& phi) {
  switch (phi.kind()) {
    case NodeKind::kTrue:
    case NodeKind::kPredicate:
      return phi;
    case NodeKind::kNot:
      return negated_nnf(phi.left());
    case NodeKind::kAnd:
      return Formula::conjunction(positive_nnf(phi.left()), positive_nnf(phi.right()));
    case NodeKind::kOr:
      return Formula::disjunction(positive_nnf(phi.left()), positive_nnf(phi.right()));
    case NodeKind::kEventually:
      return Formula::eventually(phi.window(), positive_nnf(phi.left()));
    case NodeKind::kGlobally:
      return Formula::globally(phi.window(), positive_nnf(phi.left()));
    case NodeKind::kUntil:
      return Formula::until(phi.window(), positive_nnf(phi.left()),
                            positive_nnf(phi.right()));
  }
  return phi;
}

// nnf(not phi)
Formula negated_nnf(const Formula& phi) {
  switch (phi.kind()) {
    case NodeKind::kTrue:
      return Formula::falsity();
    case NodeKind::kPredicate:
      return Formula::predicate(phi.var(), flip(phi.direction()), phi.threshold());
    case NodeKind::kNot:
      return positive_nnf(phi.left());
    case NodeKind::kAnd:
      return Formula::disjunction(negated_nnf(phi.left()), negated_nnf(phi.right()));
    case NodeKind::kOr:
      return Formula::conjunction(negated_nnf(phi.left()), negated_nnf(phi.right()));
    case NodeKind::kEventually:
      return Formula::globally(phi.window(), negated_nnf(phi.left()));
    case NodeKind::kGlobally:
      return Formula::eventually(phi.window(), negated_nnf(phi.left()));
    case NodeKind::kUntil:
      return Formula::negation(positive_nnf(phi));
  }
  return phi;
}

}  // namespace

Formula nnf(const Formula& phi) { return positive_nnf(phi); }

}  // namespace stlcc
