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
#include <vector>

#include "stlcc/trajectory.hpp"

namespace stlcc {

// Parameters of the base trajectory distribution used for Monte-Carlo kernel
// estimates and concept signatures.
//
// Each variable of each trajectory is an independent piecewise-linear path
// through `num_knots` i.i.d. Normal(0, value_std^2) knot values. Knots sit at
// fixed, equally spaced indices (the first at 0 and the last at length - 1)
// and the path is linearly interpolated between them.
struct MeasureConfig {
  std::size_t num_trajectories = 1000;
  std::size_t length = 50;
  std::size_t dims = 1;
  std::size_t num_knots = 10;
  double value_std = 1.0;
  std::uint64_t seed = 0;

  // Throws ConfigError unless num_trajectories >= 2, length >= 1, dims >= 1,
  // 1 <= num_knots <= length and value_std > 0.
  void validate() const;

  bool operator==(const MeasureConfig&) const = default;
};

// Index of knot j; strictly increasing in j when num_knots <= length.
std::size_t knot_position(std::size_t j, std::size_t num_knots,
                          std::size_t length);

// Trajectory i is drawn from an mt19937_64 seeded with
// mix_seed(cfg.seed, i), so any trajectory can be regenerated on its own and
// the output does not depend on generation order.
std::vector<Trajectory> sample_measure(const MeasureConfig& cfg);

// SplitMix64 finalizer applied to seed ^ (index * 0x9E3779B97F4A7C15).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace stlcc
