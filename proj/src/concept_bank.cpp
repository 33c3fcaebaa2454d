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

#include "stlcc/concept_bank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stlcc/error.hpp"
#include "stlcc/monitor.hpp"

namespace stlcc {

void GrammarConfig::validate() const {
  const auto& p = probabilities;
  const double all[] = {p.predicate, p.negation,  p.conjunction, p.disjunction,
                        p.eventually, p.globally, p.until};
  double sum = 0.0;
  for (double v : all) {
    if (!(v >= 0.0)) throw ConfigError("grammar: probabilities must be non-negative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError("grammar: node probabilities must sum to 1");
  }
  if (max_depth == 0) throw ConfigError("grammar: max_depth must be at least 1");
  if (max_vars_per_formula == 0) {
    throw ConfigError("grammar: max_vars must be at least 1");
  }
  if (dims == 0) throw ConfigError("grammar: dims must be at least 1");
  if (base_length < 2) throw ConfigError("grammar: base length must be at least 2");
}

void SelectionConfig::validate() const {
  if (n_target == 0) throw ConfigError("selection: n_target must be positive");
  if (!(sim_threshold > 0.0 && sim_threshold <= 1.0)) {
    throw ConfigError("selection: sim_threshold must lie in (0, 1]");
  }
}

namespace {

class FormulaSampler {
 public:
  FormulaSampler(const GrammarConfig& cfg, std::mt19937_64& rng)
      : cfg_(cfg),
        rng_(rng),
        kinds_({cfg.probabilities.predicate, cfg.probabilities.negation,
                cfg.probabilities.conjunction, cfg.probabilities.disjunction,
                cfg.probabilities.eventually, cfg.probabilities.globally,
                cfg.probabilities.until}) {
    std::vector<std::size_t> all(cfg.dims);
    std::iota(all.begin(), all.end(), 0);
    const std::size_t k = std::min(cfg.max_vars_per_formula, cfg.dims);
    for (std::size_t i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, all.size() - 1);
      std::swap(all[i], all[pick(rng_)]);
    }
    vars_.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
  }

  Formula node(std::size_t depth) {
    if (depth >= cfg_.max_depth) return predicate();
    switch (kinds_(rng_)) {
      case 0:
        return predicate();
      case 1:
        return Formula::negation(node(depth + 1));
      case 2: {
        Formula l = node(depth + 1);
        return Formula::conjunction(l, node(depth + 1));
      }
      case 3: {
        Formula l = node(depth + 1);
        return Formula::disjunction(l, node(depth + 1));
      }
      case 4: {
        const Interval w = interval();
        return Formula::eventually(w, node(depth + 1));
      }
      case 5: {
        const Interval w = interval();
        return Formula::globally(w, node(depth + 1));
      }
      default: {
        const Interval w = interval();
        Formula l = node(depth + 1);
        return Formula::until(w, l, node(depth + 1));
      }
    }
  }

 private:
  Formula predicate() {
    std::uniform_int_distribution<std::size_t> pick(0, vars_.size() - 1);
    const std::size_t var = vars_[pick(rng_)];
    const Direction dir = std::bernoulli_distribution(0.5)(rng_)
                              ? Direction::kGreaterEqual
                              : Direction::kLessEqual;
    const double threshold = std::normal_distribution<double>(0.0, 1.0)(rng_);
    return Formula::predicate(var, dir, threshold);
  }

  Interval interval() {
    const std::size_t half = cfg_.base_length / 2;
    const std::size_t a = std::uniform_int_distribution<std::size_t>(0, half)(rng_);
    const std::size_t width = std::uniform_int_distribution<std::size_t>(1, half)(rng_);
    return {a, a + width};
  }

  const GrammarConfig& cfg_;
  std::mt19937_64& rng_;
  std::discrete_distribution<int> kinds_;
  std::vector<std::size_t> vars_;
};

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::size_t scale_bound(std::size_t v, std::size_t from, std::size_t to) {
  return static_cast<std::size_t>(std::llround(
      static_cast<double>(v) * static_cast<double>(to - 1) /
      static_cast<double>(from - 1)));
}

Interval scale_interval(Interval w, std::size_t from, std::size_t to) {
  const std::size_t a = scale_bound(w.lower, from, to);
  const std::size_t b = std::max(a, scale_bound(w.upper, from, to));
  return {a, b};
}

}  // namespace

Formula sample_formula(const GrammarConfig& cfg, std::mt19937_64& rng) {
  cfg.validate();
  return FormulaSampler(cfg, rng).node(1);
}

std::vector<double> signature(const Formula& phi,
                              std::span<const Trajectory> signature_set) {
  std::vector<double> out;
  out.reserve(signature_set.size());
  for (const auto& xi : signature_set) {
    if (!fits_horizon(phi, xi.length())) {
      throw HorizonError("formula horizon " + std::to_string(phi.horizon()) +
                         " does not fit signature length " +
                         std::to_string(xi.length()));
    }
    out.push_back(std::tanh(robustness(phi, xi)));
  }
  return out;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  const double na = norm(a), nb = norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / (na * nb);
}

ConceptSelector::ConceptSelector(double sim_threshold, bool absolute_cosine)
    : threshold_(sim_threshold), absolute_(absolute_cosine) {}

double ConceptSelector::similarity(std::span<const double> a, double norm_a,
                                   std::size_t j) const {
  const double c = dot(a, signatures_[j]) / (norm_a * norms_[j]);
  return absolute_ ? std::abs(c) : c;
}

ConceptSelector::Outcome ConceptSelector::offer(const Formula& phi,
                                                std::vector<double> sig) {
  const double n = norm(sig);
  if (n == 0.0 || !std::isfinite(n)) return Outcome::kRejected;
  if (!signatures_.empty() && sig.size() != signatures_.front().size()) {
    throw ConfigError("signature length mismatch");
  }
  std::size_t clashes = 0, clash = 0;
  for (std::size_t j = 0; j < signatures_.size(); ++j) {
    if (similarity(sig, n, j) >= threshold_) {
      if (++clashes > 1) return Outcome::kRejected;
      clash = j;
    }
  }
  if (clashes == 0) {
    concepts_.push_back(phi);
    signatures_.push_back(std::move(sig));
    norms_.push_back(n);
    return Outcome::kAppended;
  }
  if (phi.size() < concepts_[clash].size()) {
    concepts_[clash] = phi;
    signatures_[clash] = std::move(sig);
    norms_[clash] = n;
    return Outcome::kReplaced;
  }
  return Outcome::kRejected;
}

ConceptBank select_concepts(const GrammarConfig& grammar,
                            const SelectionConfig& selection,
                            const MeasureConfig& measure) {
  GrammarConfig g = grammar;
  g.base_length = measure.length;
  g.dims = measure.dims;
  g.validate();
  selection.validate();
  const auto signature_set = sample_measure(measure);

  ConceptSelector selector(selection.sim_threshold, selection.absolute_cosine);
  std::mt19937_64 rng(g.seed);
  const std::size_t budget = selection.attempt_budget();
  std::size_t attempts = 0;
  while (attempts < budget && selector.size() < selection.n_target) {
    ++attempts;
    const Formula candidate = FormulaSampler(g, rng).node(1);
    if (!fits_horizon(candidate, measure.length)) continue;
    selector.offer(candidate, signature(candidate, signature_set));
  }

  ConceptBank bank;
  bank.concepts = selector.concepts();
  bank.signatures = selector.signatures();
  for (const auto& c : bank.concepts) bank.costs.push_back(c.size());
  bank.base_length = measure.length;
  bank.measure = measure;
  bank.grammar = g;
  bank.selection = selection;
  bank.attempts = attempts;
  bank.partial = bank.concepts.size() < selection.n_target;
  return bank;
}

double max_pairwise_similarity(const ConceptBank& bank) {
  double best = 0.0;
  for (std::size_t i = 0; i < bank.signatures.size(); ++i) {
    for (std::size_t j = i + 1; j < bank.signatures.size(); ++j) {
      double c = cosine_similarity(bank.signatures[i], bank.signatures[j]);
      if (bank.selection.absolute_cosine) c = std::abs(c);
      best = std::max(best, c);
    }
  }
  return best;
}

Formula rescale_formula(const Formula& phi, std::size_t from_length,
                        std::size_t to_length) {
  switch (phi.kind()) {
    case NodeKind::kTrue:
    case NodeKind::kPredicate:
      return phi;
    case NodeKind::kNot:
      return Formula::negation(rescale_formula(phi.left(), from_length, to_length));
    case NodeKind::kAnd:
      return Formula::conjunction(rescale_formula(phi.left(), from_length, to_length),
                                  rescale_formula(phi.right(), from_length, to_length));
    case NodeKind::kOr:
      return Formula::disjunction(rescale_formula(phi.left(), from_length, to_length),
                                  rescale_formula(phi.right(), from_length, to_length));
    case NodeKind::kEventually:
      return Formula::eventually(scale_interval(phi.window(), from_length, to_length),
                                 rescale_formula(phi.left(), from_length, to_length));
    case NodeKind::kGlobally:
      return Formula::globally(scale_interval(phi.window(), from_length, to_length),
                               rescale_formula(phi.left(), from_length, to_length));
    case NodeKind::kUntil:
      return Formula::until(scale_interval(phi.window(), from_length, to_length),
                            rescale_formula(phi.left(), from_length, to_length),
                            rescale_formula(phi.right(), from_length, to_length));
  }
  return phi;
}

Formula limit_horizon(const Formula& phi, std::size_t budget) {
  if (phi.horizon() <= budget) return phi;
  auto shrink_window = [budget](Interval w, std::size_t child_horizon) {
    const std::size_t room = budget - std::min(child_horizon, budget);
    const std::size_t b = std::min(w.upper, room);
    return Interval{std::min(w.lower, b), b};
  };
  switch (phi.kind()) {
    case NodeKind::kTrue:
    case NodeKind::kPredicate:
      return phi;
    case NodeKind::kNot:
      return Formula::negation(limit_horizon(phi.left(), budget));
    case NodeKind::kAnd:
      return Formula::conjunction(limit_horizon(phi.left(), budget),
                                  limit_horizon(phi.right(), budget));
    case NodeKind::kOr:
      return Formula::disjunction(limit_horizon(phi.left(), budget),
                                  limit_horizon(phi.right(), budget));
    case NodeKind::kEventually:
    case NodeKind::kGlobally: {
      const Interval w = shrink_window(phi.window(), phi.left().horizon());
      const Formula child = limit_horizon(phi.left(), budget - w.upper);
      return phi.kind() == NodeKind::kEventually ? Formula::eventually(w, child)
                                                 : Formula::globally(w, child);
    }
    case NodeKind::kUntil: {
      const Interval w = shrink_window(
          phi.window(), std::max(phi.left().horizon(), phi.right().horizon()));
      return Formula::until(w, limit_horizon(phi.left(), budget - w.upper),
                            limit_horizon(phi.right(), budget - w.upper));
    }
  }
  return phi;
}

void compute_signatures(ConceptBank& bank) {
  const auto signature_set = sample_measure(bank.measure);
  bank.signatures.clear();
  for (const auto& c : bank.concepts) {
    bank.signatures.push_back(signature(c, signature_set));
  }
}

ConceptBank rescale_bank(const ConceptBank& bank, std::size_t new_length) {
  if (new_length < 2) throw ConfigError("rescale: new length must be at least 2");
  if (bank.base_length < 2) throw ConfigError("rescale: bank base length must be at least 2");
  ConceptBank out = bank;
  out.base_length = new_length;
  out.measure.length = new_length;
  out.measure.num_knots = std::min(out.measure.num_knots, new_length);
  out.grammar.base_length = new_length;
  out.costs.clear();
  for (auto& c : out.concepts) {
    if (new_length != bank.base_length) {
      c = limit_horizon(rescale_formula(c, bank.base_length, new_length),
                        new_length - 1);
    }
    out.costs.push_back(c.size());
  }
  compute_signatures(out);
  return out;
}

}  // namespace stlcc
