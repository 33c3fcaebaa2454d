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
#include <random>
#include <span>
#include <string>
#include <vector>

#include "stlcc/formula.hpp"
#include "stlcc/measure.hpp"
#include "stlcc/trajectory.hpp"

namespace stlcc {

// Probabilities of each node kind for non-leaf positions.
struct NodeProbabilities {
  double predicate = 0.30;
  double negation = 0.05;
  double conjunction = 0.15;
  double disjunction = 0.10;
  double eventually = 0.15;
  double globally = 0.15;
  double until = 0.10;

  bool operator==(const NodeProbabilities&) const = default;
};

// Probabilistic grammar for candidate concepts.
//
// A node at depth max_depth is always a predicate. Thresholds are drawn from
// Normal(0, 1), which assumes standardized signals. Interval bounds are
// a ~ U{0..T0/2} and b = a + U{1..T0/2} with T0 = base_length. Each formula
// draws min(max_vars_per_formula, dims) distinct variables up front and every
// predicate picks one of them.
struct GrammarConfig {
  std::size_t max_depth = 3;
  std::size_t max_vars_per_formula = 2;
  NodeProbabilities probabilities;
  std::size_t base_length = 50;
  std::size_t dims = 1;
  std::uint64_t seed = 0;

  // Throws ConfigError for probabilities that are negative or do not sum to
  // one, max_depth == 0, max_vars_per_formula == 0, dims == 0 or
  // base_length < 2.
  void validate() const;

  bool operator==(const GrammarConfig&) const = default;
};

Formula sample_formula(const GrammarConfig& cfg, std::mt19937_64& rng);

// tanh(rho(phi, xi_j, 0)) for each trajectory of the signature set, in order.
// Throws HorizonError when phi does not fit the signature trajectories.
std::vector<double> signature(const Formula& phi,
                              std::span<const Trajectory> signature_set);

// Cosine similarity; 0 when either vector has zero norm.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

struct SelectionConfig {
  std::size_t n_target = 100;
  double sim_threshold = 0.9;
  // 0 means 100 * n_target.
  std::size_t max_attempts = 0;
  // Compare |cos| so that a concept and its near-negation count as redundant.
  bool absolute_cosine = true;

  std::size_t attempt_budget() const {
    return max_attempts == 0 ? 100 * n_target : max_attempts;
  }
  void validate() const;

  bool operator==(const SelectionConfig&) const = default;
};

struct ConceptBank {
  std::vector<Formula> concepts;
  // One signature per concept, all of the signature set's size. May be empty
  // when a bank is loaded without them.
  std::vector<std::vector<double>> signatures;
  // Syntactic size (AST node count) per concept.
  std::vector<std::size_t> costs;
  // Length the interval bounds refer to.
  std::size_t base_length = 0;
  // Signature set configuration; its length equals base_length.
  MeasureConfig measure;
  GrammarConfig grammar;
  SelectionConfig selection;
  std::size_t attempts = 0;
  // Fewer than n_target concepts were found within the attempt budget.
  bool partial = false;

  std::size_t size() const { return concepts.size(); }
};

// Retain/replace rule for signature-based diversity selection. Exposed so that
// the rule can be driven with hand-picked candidates.
class ConceptSelector {
 public:
  enum class Outcome { kAppended, kReplaced, kRejected };

  ConceptSelector(double sim_threshold, bool absolute_cosine);

  // A candidate is appended when its similarity to every retained concept is
  // below the threshold. If it is too similar to exactly one retained concept
  // and is strictly smaller, it takes that concept's slot. Otherwise, and for
  // zero-norm signatures, it is rejected.
  Outcome offer(const Formula& phi, std::vector<double> sig);

  const std::vector<Formula>& concepts() const { return concepts_; }
  const std::vector<std::vector<double>>& signatures() const { return signatures_; }
  std::size_t size() const { return concepts_.size(); }

 private:
  double similarity(std::span<const double> a, double norm_a, std::size_t j) const;

  double threshold_;
  bool absolute_;
  std::vector<Formula> concepts_;
  std::vector<std::vector<double>> signatures_;
  std::vector<double> norms_;
};

// Samples candidates from the grammar (seeded by grammar.seed) until
// selection.n_target concepts are retained or the attempt budget is spent.
// Candidates whose horizon does not fit the signature set are discarded.
ConceptBank select_concepts(const GrammarConfig& grammar,
                            const SelectionConfig& selection,
                            const MeasureConfig& measure);

// Largest |cosine| (or cosine) over all retained pairs; 0 for fewer than two.
double max_pairwise_similarity(const ConceptBank& bank);

// Rescales every interval bound v to round(v * (new_length - 1) / (T0 - 1)),
// keeping a <= b, then shrinks outer windows if rounding pushed a horizon
// past new_length - 1. Signatures are recomputed on a measure sample of the
// new length. Throws ConfigError for new_length < 2.
ConceptBank rescale_bank(const ConceptBank& bank, std::size_t new_length);

// Interval rescaling of a single formula (no horizon repair).
Formula rescale_formula(const Formula& phi, std::size_t from_length,
                        std::size_t to_length);

// Shortens temporal windows, outermost first, until phi.horizon() <= budget.
Formula limit_horizon(const Formula& phi, std::size_t budget);

// Recomputes signatures from the bank's measure configuration.
void compute_signatures(ConceptBank& bank);

}  // namespace stlcc
