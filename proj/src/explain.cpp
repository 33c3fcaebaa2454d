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

#include "stlcc/explain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "stlcc/error.hpp"
#include "stlcc/monitor.hpp"
#include "stlcc/syntax.hpp"

namespace stlcc {

void SelectionMode::validate() const {
  if (kind == Kind::kTopGamma && gamma < 1) {
    throw ConfigError("explain: gamma must be at least 1");
  }
  if (kind == Kind::kCumulative && !(theta > 0.0 && theta <= 1.0)) {
    throw ConfigError("explain: theta must lie in (0, 1]");
  }
}

std::vector<double> relevance(const ForwardPass& pass, const ConceptModel& model,
                              std::size_t yhat) {
  const std::size_t K = model.num_classes();
  if (yhat >= K) throw ConfigError("relevance: class index out of range");
  std::vector<double> r(pass.scores.rows());
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = model.weights(yhat, flat_index(i, yhat, K)) * pass.scores(i, yhat);
  }
  return r;
}

std::vector<double> relevance(const Trajectory& x, const ConceptModel& model,
                              std::size_t yhat) {
  return relevance(forward(x, model), model, yhat);
}

std::vector<std::size_t> select_for_explanation(std::span<const double> r,
                                                const SelectionMode& mode) {
  mode.validate();
  std::vector<std::size_t> order;
  double total = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] != 0.0) {
      order.push_back(i);
      total += std::abs(r[i]);
    }
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(r[a]) > std::abs(r[b]);
  });
  if (mode.kind == SelectionMode::Kind::kTopGamma) {
    if (order.size() > mode.gamma) order.resize(mode.gamma);
    return order;
  }
  const double goal = mode.theta * total * (1.0 - 1e-12);
  double mass = 0.0;
  std::size_t keep = 0;
  while (keep < order.size() && mass < goal) mass += std::abs(r[order[keep++]]);
  order.resize(keep);
  return order;
}

namespace {

Formula merge_nested_window(const Formula& phi) {
  const Formula child = phi.left();
  if (child.kind() != phi.kind()) return phi;
  const Interval outer = phi.window(), inner = child.window();
  const Interval merged{outer.lower + inner.lower, outer.upper + inner.upper};
  return phi.kind() == NodeKind::kEventually ? Formula::eventually(merged, child.left())
                                             : Formula::globally(merged, child.left());
}

Formula rewrite_root(const Formula& phi) {
  switch (phi.kind()) {
    case NodeKind::kNot:
      if (phi.left().kind() == NodeKind::kNot && !phi.left().is_false()) {
        return phi.left().left();
      }
      if (phi.left().is_false()) return Formula::truth();
      return phi;
    case NodeKind::kAnd: {
      const Formula l = phi.left(), r = phi.right();
      if (l.is_false() || r.is_false()) return Formula::falsity();
      if (l.is_true()) return r;
      if (r.is_true()) return l;
      if (l == r) return l;
      return phi;
    }
    case NodeKind::kOr: {
      const Formula l = phi.left(), r = phi.right();
      if (l.is_true() || r.is_true()) return Formula::truth();
      if (l.is_false()) return r;
      if (r.is_false()) return l;
      if (l == r) return l;
      return phi;
    }
    case NodeKind::kEventually:
      if (phi.left().is_false()) return Formula::falsity();
      return merge_nested_window(phi);
    case NodeKind::kGlobally:
      // Exact even on a clipped window: both sides are +LARGE everywhere.
      if (phi.left().is_true()) return Formula::truth();
      return merge_nested_window(phi);
    case NodeKind::kUntil:
      if (phi.right().is_false()) return Formula::falsity();
      return phi;
    default:
      return phi;
  }
}

Formula rebuild(const Formula& phi, Formula left, Formula right) {
  switch (phi.kind()) {
    case NodeKind::kNot:
      return Formula::negation(std::move(left));
    case NodeKind::kAnd:
      return Formula::conjunction(std::move(left), std::move(right));
    case NodeKind::kOr:
      return Formula::disjunction(std::move(left), std::move(right));
    case NodeKind::kEventually:
      return Formula::eventually(phi.window(), std::move(left));
    case NodeKind::kGlobally:
      return Formula::globally(phi.window(), std::move(left));
    case NodeKind::kUntil:
      return Formula::until(phi.window(), std::move(left), std::move(right));
    default:
      return phi;
  }
}

bool is_binary(const Formula& phi) {
  return phi.kind() == NodeKind::kAnd || phi.kind() == NodeKind::kOr ||
         phi.kind() == NodeKind::kUntil;
}

bool is_leaf(const Formula& phi) {
  return phi.kind() == NodeKind::kTrue || phi.kind() == NodeKind::kPredicate;
}

Formula simplify_pass(const Formula& phi) {
  if (is_leaf(phi)) return phi;
  Formula left = simplify_pass(phi.left());
  Formula right = is_binary(phi) ? simplify_pass(phi.right()) : Formula();
  Formula cur = rebuild(phi, std::move(left), std::move(right));
  while (true) {
    Formula next = rewrite_root(cur);
    if (next == cur) return cur;
    cur = next;
  }
}

using Path = std::vector<int>;

Formula at_path(const Formula& phi, const Path& path) {
  Formula cur = phi;
  for (int step : path) cur = step == 0 ? cur.left() : cur.right();
  return cur;
}

Formula replace_at(const Formula& phi, const Path& path, std::size_t depth,
                   const Formula& replacement) {
  if (depth == path.size()) return replacement;
  if (path[depth] == 0) {
    return rebuild(phi, replace_at(phi.left(), path, depth + 1, replacement),
                   is_binary(phi) ? phi.right() : Formula());
  }
  return rebuild(phi, phi.left(), replace_at(phi.right(), path, depth + 1, replacement));
}

struct PendingNode {
  Path path;
  std::size_t lo;
  std::size_t hi;
};

// Children with the time range over which the parent's evaluation inspects
// them.
std::vector<PendingNode> children_of(const Formula& node, const PendingNode& p) {
  std::vector<PendingNode> out;
  auto child = [&](int side, std::size_t lo, std::size_t hi) {
    Path path = p.path;
    path.push_back(side);
    out.push_back({std::move(path), lo, hi});
  };
  switch (node.kind()) {
    case NodeKind::kNot:
      child(0, p.lo, p.hi);
      break;
    case NodeKind::kAnd:
    case NodeKind::kOr:
      child(0, p.lo, p.hi);
      child(1, p.lo, p.hi);
      break;
    case NodeKind::kEventually:
    case NodeKind::kGlobally:
      child(0, p.lo + node.window().lower, p.hi + node.window().upper);
      break;
    case NodeKind::kUntil:
      child(0, p.lo, p.hi + node.window().upper);
      child(1, p.lo + node.window().lower, p.hi + node.window().upper);
      break;
    default:
      break;
  }
  return out;
}

// Returns 1/0 when psi has the same Boolean value on every sample over
// [lo, hi] (clipped), -1 otherwise.
int constant_value(const Formula& psi, const Dataset& data, std::size_t lo,
                   std::size_t hi) {
  int value = -1;
  for (const auto& s : data.samples) {
    const std::size_t n = s.length();
    if (lo >= n) return -1;
    const auto trace = boolean_trace(psi, s);
    for (std::size_t t = lo; t <= std::min(hi, n - 1); ++t) {
      const int v = trace[t] ? 1 : 0;
      if (value == -1) value = v;
      if (v != value) return -1;
    }
  }
  return value;
}

bool strictly_satisfies(const Formula& phi, const Trajectory& x) {
  return robustness(phi, x) > 0.0;
}

Formula prune_constant_subformulae(const Formula& phi, const Trajectory& x,
                                   const Dataset& data) {
  Formula current = phi;
  std::vector<PendingNode> queue{{{}, 0, 0}};
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const PendingNode item = queue[q];
    const Formula node = at_path(current, item.path);
    if (!item.path.empty() && !node.is_true() && !node.is_false()) {
      const int v = constant_value(node, data, item.lo, item.hi);
      if (v != -1) {
        const Formula candidate = replace_at(
            current, item.path, 0, v == 1 ? Formula::truth() : Formula::falsity());
        if (strictly_satisfies(candidate, x)) {
          current = candidate;
          continue;
        }
      }
    }
    if (node.is_false()) continue;
    for (auto& c : children_of(node, item)) queue.push_back(std::move(c));
  }
  return current;
}

void collect_predicates(const Formula& phi, Path& path, std::vector<Path>& out) {
  if (phi.kind() == NodeKind::kPredicate) {
    out.push_back(path);
    return;
  }
  if (is_leaf(phi)) return;
  path.push_back(0);
  collect_predicates(phi.left(), path, out);
  path.pop_back();
  if (is_binary(phi)) {
    path.push_back(1);
    collect_predicates(phi.right(), path, out);
    path.pop_back();
  }
}

// The predicate at `path` seen through the temporal operators and negations
// above it, with sibling operands dropped. Also reports whether robustness
// grows (+1) or shrinks (-1) with the signal value.
Formula projection(const Formula& phi, const Path& path, int& slope) {
  std::vector<Formula> chain{phi};
  for (int step : path) chain.push_back(step == 0 ? chain.back().left() : chain.back().right());
  const Formula& leaf = chain.back();
  slope = leaf.direction() == Direction::kGreaterEqual ? 1 : -1;
  Formula out = leaf;
  for (std::size_t d = path.size(); d-- > 0;) {
    const Formula& node = chain[d];
    switch (node.kind()) {
      case NodeKind::kNot:
        out = Formula::negation(out);
        slope = -slope;
        break;
      case NodeKind::kEventually:
        out = Formula::eventually(node.window(), out);
        break;
      case NodeKind::kGlobally:
        out = Formula::globally(node.window(), out);
        break;
      case NodeKind::kUntil:
        out = path[d] == 0 ? Formula::globally({0, node.window().upper}, out)
                           : Formula::eventually(node.window(), out);
        break;
      default:
        break;
    }
  }
  return out;
}

Formula adjust_thresholds(const Formula& phi, const Trajectory& x,
                          const SimplifyContext& ctx) {
  const Dataset& data = *ctx.train_set;
  std::vector<Path> preds;
  Path scratch;
  collect_predicates(phi, scratch, preds);
  Formula current = phi;
  for (const Path& path : preds) {
    int slope = 1;
    const Formula proj = projection(current, path, slope);
    double in_sum = 0.0, out_sum = 0.0;
    std::size_t in_n = 0, out_n = 0;
    for (std::size_t s = 0; s < data.size(); ++s) {
      const double r = robustness(proj, data.samples[s]);
      if (data.labels[s] == ctx.predicted_class) {
        in_sum += r;
        ++in_n;
      } else {
        out_sum += r;
        ++out_n;
      }
    }
    if (in_n == 0 || out_n == 0) continue;
    const double midpoint = 0.5 * (in_sum / static_cast<double>(in_n) +
                                   out_sum / static_cast<double>(out_n));
    const Formula leaf = at_path(current, path);
    const double c = leaf.threshold() + slope * midpoint;
    if (!std::isfinite(c) || std::abs(midpoint) >= 0.5 * kLarge) continue;
    const Formula candidate =
        replace_at(current, path, 0, Formula::predicate(leaf.var(), leaf.direction(), c));
    if (strictly_satisfies(candidate, x)) current = candidate;
  }
  return current;
}

}  // namespace

Formula simplify_logic(const Formula& phi) {
  Formula cur = phi;
  while (true) {
    Formula next = simplify_pass(cur);
    if (next == cur) return cur;
    cur = next;
  }
}

Formula simplify_for_sample(const Formula& phi, const Trajectory& x,
                            const SimplifyContext& ctx) {
  Formula f = phi;
  if (robustness(f, x) < 0.0) f = nnf(Formula::negation(f));

  const Formula logical = simplify_logic(f);
  if (robustness(logical, x) > 0.0 || robustness(f, x) <= 0.0) f = logical;

  if (ctx.train_set == nullptr || ctx.train_set->size() == 0) return f;
  if (robustness(f, x) <= 0.0) return f;

  const Formula pruned = prune_constant_subformulae(f, x, *ctx.train_set);
  const Formula tidy = simplify_logic(pruned);
  f = strictly_satisfies(tidy, x) ? tidy : pruned;

  return adjust_thresholds(f, x, ctx);
}

LocalExplanation local_explanation(const Trajectory& x, const ConceptModel& model,
                                   const SelectionMode& mode, const Dataset& train_set) {
  mode.validate();
  const ForwardPass pass = forward(x, model);
  LocalExplanation out;
  out.predicted = pass.predicted;
  out.logits = pass.logits;
  out.mode = mode;
  const auto r = relevance(pass, model, pass.predicted);
  out.residual = pass.logits[pass.predicted] - model.bias[pass.predicted] -
                 std::accumulate(r.begin(), r.end(), 0.0);

  const SimplifyContext ctx{&train_set, pass.predicted};
  std::vector<Formula> seen;
  for (std::size_t i : select_for_explanation(r, mode)) {
    Conjunct c;
    c.concept_index = i;
    c.concept_formula = model.bank.concepts[i];
    c.relevance = r[i];
    c.simplified = simplify_for_sample(c.concept_formula, x, ctx);
    c.robustness = robustness(c.simplified, x);
    if (!(c.robustness > 0.0) || c.simplified.is_true()) continue;
    // A conjunct every training sample satisfies says nothing about the class.
    const bool uninformative =
        std::all_of(train_set.samples.begin(), train_set.samples.end(),
                    [&](const Trajectory& s) { return boolean_sat(c.simplified, s); });
    if (uninformative && train_set.size() > 0) continue;
    if (std::find(seen.begin(), seen.end(), c.simplified) != seen.end()) continue;
    seen.push_back(c.simplified);
    out.conjuncts.push_back(std::move(c));
  }
  if (out.conjuncts.empty()) {
    out.vacuous = true;
    out.formula = Formula::truth();
  } else {
    out.formula = out.conjuncts.front().simplified;
    for (std::size_t j = 1; j < out.conjuncts.size(); ++j) {
      out.formula = Formula::conjunction(out.formula, out.conjuncts[j].simplified);
    }
  }
  out.robustness = robustness(out.formula, x);
  return out;
}

GlobalExplanation global_explanation(std::size_t k, const Dataset& train_set,
                                     const ConceptModel& model,
                                     const GlobalConfig& cfg) {
  train_set.validate();
  if (k >= model.num_classes()) throw ConfigError("global explanation: class out of range");
  if (!(cfg.coverage_target >= 0.0 && cfg.coverage_target <= 1.0)) {
    throw ConfigError("global explanation: coverage target must lie in [0, 1]");
  }
  if (!(cfg.leakage_max >= 0.0 && cfg.leakage_max <= 1.0)) {
    throw ConfigError("global explanation: leakage_max must lie in [0, 1]");
  }
  GlobalExplanation out;
  out.class_index = k;

  std::vector<std::size_t> members, others, universe;
  for (std::size_t s = 0; s < train_set.size(); ++s) {
    (train_set.labels[s] == k ? members : others).push_back(s);
  }
  if (members.empty()) throw DataError("global explanation: class has no training samples");

  std::vector<Formula> pool;
  std::set<std::string> seen;
  for (std::size_t s : members) {
    const LocalExplanation local =
        local_explanation(train_set.samples[s], model, cfg.mode, train_set);
    if (local.predicted != k) continue;
    universe.push_back(s);
    for (const auto& c : local.conjuncts) {
      if (seen.insert(to_string(c.simplified)).second) pool.push_back(c.simplified);
    }
  }
  out.universe_size = universe.size();
  out.candidates = pool.size();

  // Satisfaction of each candidate on every training sample.
  std::vector<std::vector<bool>> sat(pool.size(), std::vector<bool>(train_set.size()));
  for (std::size_t j = 0; j < pool.size(); ++j) {
    for (std::size_t s = 0; s < train_set.size(); ++s) {
      sat[j][s] = boolean_sat(pool[j], train_set.samples[s]);
    }
  }
  auto leak_count = [&](const std::vector<std::size_t>& chosen_pool) {
    std::size_t n = 0;
    for (std::size_t s : others) {
      n += std::any_of(chosen_pool.begin(), chosen_pool.end(),
                       [&](std::size_t j) { return sat[j][s]; });
    }
    return n;
  };
  const double other_n = static_cast<double>(others.size());
  auto leakage_of = [&](const std::vector<std::size_t>& chosen_pool) {
    return others.empty() ? 0.0 : static_cast<double>(leak_count(chosen_pool)) / other_n;
  };

  std::vector<std::size_t> kept;
  for (std::size_t j = 0; j < pool.size(); ++j) {
    if (leakage_of({j}) <= cfg.leakage_max) kept.push_back(j);
  }
  out.candidates_kept = kept.size();
  if (kept.empty()) {
    out.no_candidates = true;
    out.formula = Formula::falsity();
    return out;
  }

  SetCoverProblem problem;
  problem.universe_size = universe.size();
  for (std::size_t j : kept) {
    std::vector<std::size_t> elems;
    for (std::size_t u = 0; u < universe.size(); ++u) {
      if (sat[j][universe[u]]) elems.push_back(u);
    }
    problem.sets.push_back(std::move(elems));
    problem.costs.push_back(static_cast<double>(pool[j].size()));
  }
  auto admissible = [&](std::span<const std::size_t> chosen, std::size_t cand) {
    std::vector<std::size_t> pool_ids;
    for (std::size_t c : chosen) pool_ids.push_back(kept[c]);
    pool_ids.push_back(kept[cand]);
    return leakage_of(pool_ids) <= cfg.leakage_max;
  };
  const SetCoverResult cover = greedy_set_cover(problem, cfg.coverage_target, admissible);

  std::vector<std::size_t> chosen_pool;
  for (std::size_t c : cover.chosen) {
    chosen_pool.push_back(kept[c]);
    out.disjuncts.push_back(pool[kept[c]]);
    out.disjunct_costs.push_back(pool[kept[c]].size());
    out.total_cost += pool[kept[c]].size();
  }
  if (out.disjuncts.empty()) {
    out.formula = Formula::falsity();
  } else {
    out.formula = out.disjuncts.front();
    for (std::size_t j = 1; j < out.disjuncts.size(); ++j) {
      out.formula = Formula::disjunction(out.formula, out.disjuncts[j]);
    }
  }

  auto satisfied = [&](std::size_t s) {
    return std::any_of(chosen_pool.begin(), chosen_pool.end(),
                       [&](std::size_t j) { return sat[j][s]; });
  };
  std::size_t member_hits = 0, universe_hits = 0;
  for (std::size_t s : members) member_hits += satisfied(s);
  for (std::size_t s : universe) universe_hits += satisfied(s);
  out.coverage = static_cast<double>(member_hits) / static_cast<double>(members.size());
  out.universe_coverage =
      universe.empty() ? 0.0
                       : static_cast<double>(universe_hits) / static_cast<double>(universe.size());
  out.leakage = leakage_of(chosen_pool);
  out.target_met = cover.target_met && !universe.empty();
  return out;
}

}  // namespace stlcc
