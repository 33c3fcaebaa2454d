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

#include "stlcc/set_cover.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stlcc {

SetCoverResult greedy_set_cover(const SetCoverProblem& problem,
                                double coverage_target,
                                const CoverAdmissible& admissible) {
  if (problem.sets.size() != problem.costs.size()) {
    throw std::invalid_argument("set cover: one cost per candidate required");
  }
  if (!(coverage_target >= 0.0 && coverage_target <= 1.0)) {
    throw std::invalid_argument("set cover: coverage target must lie in [0, 1]");
  }
  for (std::size_t j = 0; j < problem.sets.size(); ++j) {
    if (!(problem.costs[j] > 0.0)) {
      throw std::invalid_argument("set cover: costs must be positive");
    }
    for (std::size_t e : problem.sets[j]) {
      if (e >= problem.universe_size) {
        throw std::invalid_argument("set cover: element outside the universe");
      }
    }
  }

  std::vector<std::vector<std::size_t>> sets = problem.sets;
  for (auto& s : sets) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }

  const auto needed = static_cast<std::size_t>(std::ceil(
      coverage_target * static_cast<double>(problem.universe_size) - 1e-9));
  std::vector<bool> covered(problem.universe_size, false);
  std::vector<bool> used(problem.sets.size(), false);
  SetCoverResult result;
  while (result.covered < needed) {
    std::size_t best = problem.sets.size();
    std::size_t best_gain = 0;
    for (std::size_t j = 0; j < problem.sets.size(); ++j) {
      if (used[j]) continue;
      std::size_t gain = 0;
      for (std::size_t e : sets[j]) gain += !covered[e];
      if (gain == 0) continue;
      // gain / cost > best_gain / best_cost without dividing
      if (best != problem.sets.size() &&
          static_cast<double>(gain) * problem.costs[best] <=
              static_cast<double>(best_gain) * problem.costs[j]) {
        continue;
      }
      if (admissible && !admissible(result.chosen, j)) continue;
      best = j;
      best_gain = gain;
    }
    if (best == problem.sets.size()) break;
    used[best] = true;
    result.chosen.push_back(best);
    result.total_cost += problem.costs[best];
    for (std::size_t e : sets[best]) {
      if (!covered[e]) {
        covered[e] = true;
        ++result.covered;
      }
    }
  }
  result.target_met = result.covered >= needed;
  return result;
}

}  // namespace stlcc
