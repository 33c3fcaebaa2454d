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
#include <functional>
#include <span>
#include <vector>

namespace stlcc {

// Weighted set cover instance: `sets[j]` lists the elements (indices below
// universe_size) covered by candidate j at cost costs[j] > 0.
struct SetCoverProblem {
  std::size_t universe_size = 0;
  std::vector<std::vector<std::size_t>> sets;
  std::vector<double> costs;
};

struct SetCoverResult {
  std::vector<std::size_t> chosen;  // in pick order
  double total_cost = 0.0;
  std::size_t covered = 0;
  bool target_met = false;
};

// Optional veto consulted before a candidate is picked, given the candidates
// already chosen.
using CoverAdmissible =
    std::function<bool(std::span<const std::size_t> chosen, std::size_t candidate)>;

// Greedy weighted set cover: repeatedly picks the candidate with the most
// newly covered elements per unit cost (lowest index on ties) until
// ceil(coverage_target * universe_size) elements are covered or no admissible
// candidate adds coverage. With coverage_target = 1 the cost is within a
// factor H(max set size) <= 1 + ln|U| of optimal.
//
// Throws std::invalid_argument for non-positive costs, out-of-range elements
// or a target outside [0, 1].
SetCoverResult greedy_set_cover(const SetCoverProblem& problem,
                                double coverage_target = 1.0,
                                const CoverAdmissible& admissible = {});

}  // namespace stlcc
