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
#include <span>
#include <vector>

#include "stlcc/formula.hpp"
#include "stlcc/trajectory.hpp"

namespace stlcc {

// Surrogate for +/- infinity. `true` evaluates to +kLarge; an eventually or
// until whose window lies entirely past the end of the trace evaluates to
// -kLarge and a globally over such a window to +kLarge.
inline constexpr double kLarge = 1e9;

enum class EvalMode {
  // Direct O(T * window) loops; reference path.
  kNaive,
  // Monotone-deque sliding min/max for F and G plus an incremental until.
  // Produces bit-identical results to kNaive.
  kSlidingWindow,
};

// Robustness of `phi` at every time step of `tau`. Windows are clipped to the
// trace: [t + a, min(t + b, T - 1)].
//
// Throws EvaluationError if a predicate references a variable >= tau.dims().
std::vector<double> robustness_trace(const Formula& phi, const Trajectory& tau,
                                     EvalMode mode = EvalMode::kSlidingWindow);

// Quantitative semantics at a single time index (default t = 0). Throws
// EvaluationError when t >= T or a variable is out of range.
double robustness(const Formula& phi, const Trajectory& tau, std::size_t t = 0,
                  EvalMode mode = EvalMode::kSlidingWindow);

// Classical Boolean semantics, evaluated by direct recursion without going
// through robustness. Predicates are non-strict so ties satisfy.
bool boolean_sat(const Formula& phi, const Trajectory& tau, std::size_t t = 0);

// Boolean satisfaction at every time step, computed bottom-up over whole
// traces. Same clipping rules as robustness_trace.
std::vector<bool> boolean_trace(const Formula& phi, const Trajectory& tau);

// True when phi can be evaluated at t = 0 without clipping any window.
inline bool fits_horizon(const Formula& phi, std::size_t length) {
  return phi.horizon() < length;
}

// out[t] = min over [t + lower, min(t + upper, n - 1)] of values; +kLarge for
// an empty window. Monotone deque, O(n).
std::vector<double> sliding_min(std::span<const double> values, Interval window);
// As sliding_min with max; -kLarge for an empty window.
std::vector<double> sliding_max(std::span<const double> values, Interval window);

}  // namespace stlcc
