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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stlcc/dataset.hpp"
#include "stlcc/formula.hpp"
#include "stlcc/model.hpp"
#include "stlcc/set_cover.hpp"

namespace stlcc {

// How concepts are picked from a relevance vector.
struct SelectionMode {
  enum class Kind { kTopGamma, kCumulative };
  Kind kind = Kind::kTopGamma;
  std::size_t gamma = 3;
  double theta = 0.8;

  static SelectionMode top_gamma(std::size_t gamma) {
    return {Kind::kTopGamma, gamma, 0.0};
  }
  static SelectionMode cumulative(double theta) {
    return {Kind::kCumulative, 0, theta};
  }
  void validate() const;
};

// r[i] = W[yhat][index(i, yhat)] * z[i][yhat]. Throws ConfigError when yhat is
// not a class of the model.
std::vector<double> relevance(const ForwardPass& pass, const ConceptModel& model,
                              std::size_t yhat);
std::vector<double> relevance(const Trajectory& x, const ConceptModel& model,
                              std::size_t yhat);

// Indices ordered by |r| descending, lower index first on ties. Zero-relevance
// entries are never selected, so an all-zero r yields an empty list.
// top_gamma keeps the first gamma; cumulative keeps the shortest prefix whose
// |r| mass reaches theta * sum |r|.
std::vector<std::size_t> select_for_explanation(std::span<const double> r,
                                                const SelectionMode& mode);

// Rewrites to a fixpoint: not not f => f, f and f => f, f or f => f,
// f and true => f, f or true => true, f and false => false, f or false => f,
// G[a,b] G[c,d] f => G[a+c,b+d] f and likewise for F.
Formula simplify_logic(const Formula& phi);

// Training data consulted while simplifying a concept for one sample.
struct SimplifyContext {
  const Dataset* train_set = nullptr;
  std::size_t predicted_class = 0;
};

// Post-processing of one selected concept for sample x, in order:
//  1. polarity: if rho(phi, x, 0) < 0, use nnf(not phi) instead;
//  2. simplify_logic;
//  3. pruning: a strict subformula whose Boolean value is the same on every
//     training sample at every time the root inspects it (t = 0 for the
//     root) becomes true/false, then simplify_logic again;
//  4. thresholds: each predicate's threshold moves to the point where its
//     robustness, seen through the enclosing temporal operators, is centred
//     between the predicted class mean and the complement mean.
// Steps 3 and 4 only keep a rewrite when x still strictly satisfies the
// formula.
Formula simplify_for_sample(const Formula& phi, const Trajectory& x,
                            const SimplifyContext& ctx);

struct Conjunct {
  std::size_t concept_index = 0;
  Formula concept_formula;
  Formula simplified;
  double relevance = 0.0;
  // rho(simplified, x, 0)
  double robustness = 0.0;
};

struct LocalExplanation {
  std::size_t predicted = 0;
  std::vector<double> logits;
  // Sorted by |relevance| descending.
  std::vector<Conjunct> conjuncts;
  // Conjunction of the simplified conjuncts; `true` when vacuous.
  Formula formula;
  double robustness = 0.0;
  SelectionMode mode;
  // logit(yhat) - bias(yhat) - sum of all relevances (the off-column part).
  double residual = 0.0;
  bool vacuous = false;
};

// Explains the model's prediction on x. A conjunct is dropped when it cannot
// be made strictly satisfied by x (robustness exactly 0), simplifies to
// `true`, repeats an earlier conjunct, or holds on every training sample.
LocalExplanation local_explanation(const Trajectory& x, const ConceptModel& model,
                                   const SelectionMode& mode, const Dataset& train_set);

struct GlobalConfig {
  double coverage_target = 0.95;
  double leakage_max = 0.10;
  SelectionMode mode;
};

struct GlobalExplanation {
  std::size_t class_index = 0;
  std::vector<Formula> disjuncts;
  std::vector<std::size_t> disjunct_costs;
  Formula formula;  // disjunction of the disjuncts
  // Fraction of class-k training samples satisfying the disjunction.
  double coverage = 0.0;
  // Same over the correctly classified class-k samples (the cover universe).
  double universe_coverage = 0.0;
  // Fraction of the other training samples satisfying the disjunction.
  double leakage = 0.0;
  std::size_t total_cost = 0;
  std::size_t universe_size = 0;
  std::size_t candidates = 0;
  std::size_t candidates_kept = 0;
  bool target_met = false;
  // Empty candidate pool after the leakage filter.
  bool no_candidates = false;
};

// Aggregates the distinct conjuncts of local explanations of correctly
// classified class-k training samples, drops those satisfied by more than
// leakage_max of the other samples, and picks a cheap disjunction by greedy
// set cover (cost = AST size, covering = Boolean satisfaction at t = 0). A
// candidate that would push the disjunction's own leakage above leakage_max is
// skipped.
GlobalExplanation global_explanation(std::size_t k, const Dataset& train_set,
                                     const ConceptModel& model,
                                     const GlobalConfig& cfg = {});

}  // namespace stlcc
