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

#include "stlcc/measure.hpp"

#include <cmath>
#include <random>

#include "stlcc/error.hpp"

namespace stlcc {

void MeasureConfig::validate() const {
  if (num_trajectories < 2) throw ConfigError("measure: M must be at least 2");
  if (length < 1) throw ConfigError("measure: T must be positive");
  if (dims < 1) throw ConfigError("measure: D must be positive");
  if (num_knots < 1 || num_knots > length) {
    throw ConfigError("measure: num_knots must lie in [1, T]");
  }
  if (!(value_std > 0.0) || !std::isfinite(value_std)) {
    throw ConfigError("measure: value_std must be positive");
  }
}

std::size_t knot_position(std::size_t j, std::size_t num_knots,
                          std::size_t length) {
  if (num_knots <= 1) return 0;
  const std::size_t span = num_knots - 1;
  return (j * (length - 1) + span / 2) / span;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed ^ (index * 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<Trajectory> sample_measure(const MeasureConfig& cfg) {
  cfg.validate();
  const std::size_t T = cfg.length;
  const std::size_t K = cfg.num_knots;
  std::vector<Trajectory> out;
  out.reserve(cfg.num_trajectories);
  std::vector<double> knots(K);
  for (std::size_t i = 0; i < cfg.num_trajectories; ++i) {
    std::mt19937_64 rng(mix_seed(cfg.seed, i));
    std::normal_distribution<double> normal(0.0, cfg.value_std);
    Trajectory tau(cfg.dims, T);
    for (std::size_t d = 0; d < cfg.dims; ++d) {
      for (double& k : knots) k = normal(rng);
      auto row = tau.row(d);
      if (K == 1) {
        for (double& v : row) v = knots[0];
        continue;
      }
      for (std::size_t j = 0; j + 1 < K; ++j) {
        const std::size_t p0 = knot_position(j, K, T);
        const std::size_t p1 = knot_position(j + 1, K, T);
        const double width = static_cast<double>(p1 - p0);
        row[p0] = knots[j];
        for (std::size_t t = p0 + 1; t < p1; ++t) {
          const double w = static_cast<double>(t - p0) / width;
          row[t] = (1.0 - w) * knots[j] + w * knots[j + 1];
        }
      }
      row[T - 1] = knots[K - 1];
    }
    out.push_back(std::move(tau));
  }
  return out;
}

}  // namespace stlcc
