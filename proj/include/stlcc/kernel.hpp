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
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "stlcc/formula.hpp"
#include "stlcc/trajectory.hpp"

namespace stlcc {

// Locality functional of a trajectory: 2 * exp(-||xi - tau||^2 / epsilon) - 1,
// in [-1, 1]. Throws DataError on shape mismatch and ConfigError for a
// non-positive epsilon.
double rho_tau(const Trajectory& tau, const Trajectory& xi, double epsilon);

// Median of all pairwise squared distances of `sample`.
double median_pairwise_squared_distance(std::span<const Trajectory> sample);

// Shared state for Monte-Carlo estimates of the formula and trajectory
// kernels: a fixed base sample, the locality scale and the squash flag. All
// estimates are plain averages over the base sample taken in index order.
class KernelContext {
 public:
  struct Options {
    // Median heuristic when unset.
    std::optional<double> epsilon;
    // Apply tanh to formula robustness before integrating.
    bool squash = true;
  };

  // Throws ConfigError for fewer than two base trajectories, mixed shapes or a
  // non-positive epsilon.
  explicit KernelContext(std::vector<Trajectory> base_sample);
  KernelContext(std::vector<Trajectory> base_sample, Options options);

  std::span<const Trajectory> base_sample() const { return *base_; }
  double epsilon() const { return epsilon_; }
  bool squash() const { return squash_; }

  // s(rho(phi, xi_j, 0)) for every base trajectory, s = tanh or identity.
  // Throws EvaluationError when phi's horizon does not fit the base length.
  std::vector<double> formula_features(const Formula& phi) const;

  // rho_tau(xi_j) for every base trajectory.
  std::vector<double> trajectory_features(const Trajectory& tau) const;

 private:
  std::shared_ptr<const std::vector<Trajectory>> base_;
  double epsilon_ = 1.0;
  bool squash_ = true;
};

// k(tau, phi) = mean_j rho_tau(xi_j) * s(rho(phi, xi_j, 0)).
double cross_kernel(const Trajectory& tau, const Formula& phi,
                    const KernelContext& ctx);

// k(phi, psi) = mean_j s(rho(phi, xi_j, 0)) * s(rho(psi, xi_j, 0)).
double formula_kernel(const Formula& phi, const Formula& psi,
                      const KernelContext& ctx);

// Row-major n x n Gram matrix of formula_kernel over `formulas`.
std::vector<double> gram_matrix(std::span<const Formula> formulas,
                                const KernelContext& ctx);

}  // namespace stlcc
