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

#include "stlcc/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "stlcc/error.hpp"
#include "stlcc/monitor.hpp"

namespace stlcc {
namespace {

double dot_mean(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) sum += a[j] * b[j];
  return sum / static_cast<double>(a.size());
}

}  // namespace

double rho_tau(const Trajectory& tau, const Trajectory& xi, double epsilon) {
  if (!(epsilon > 0.0)) throw ConfigError("kernel: epsilon must be positive");
  return 2.0 * std::exp(-squared_distance(xi, tau) / epsilon) - 1.0;
}

double median_pairwise_squared_distance(std::span<const Trajectory> sample) {
  if (sample.size() < 2) {
    throw ConfigError("median heuristic needs at least two trajectories");
  }
  std::vector<double> d;
  d.reserve(sample.size() * (sample.size() - 1) / 2);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    for (std::size_t j = i + 1; j < sample.size(); ++j) {
      d.push_back(squared_distance(sample[i], sample[j]));
    }
  }
  const std::size_t mid = d.size() / 2;
  std::nth_element(d.begin(), d.begin() + mid, d.end());
  if (d.size() % 2 == 1) return d[mid];
  const double upper = d[mid];
  const double lower = *std::max_element(d.begin(), d.begin() + mid);
  return 0.5 * (lower + upper);
}

KernelContext::KernelContext(std::vector<Trajectory> base_sample)
    : KernelContext(std::move(base_sample), Options{}) {}

KernelContext::KernelContext(std::vector<Trajectory> base_sample, Options options)
    : squash_(options.squash) {
  if (base_sample.size() < 2) {
    throw ConfigError("kernel: base sample needs at least two trajectories");
  }
  for (const auto& xi : base_sample) {
    if (xi.dims() != base_sample.front().dims() ||
        xi.length() != base_sample.front().length()) {
      throw ConfigError("kernel: base trajectories must share one shape");
    }
  }
  epsilon_ = options.epsilon ? *options.epsilon
                             : median_pairwise_squared_distance(base_sample);
  if (!(epsilon_ > 0.0) || !std::isfinite(epsilon_)) {
    throw ConfigError("kernel: epsilon must be positive");
  }
  base_ = std::make_shared<const std::vector<Trajectory>>(std::move(base_sample));
}

std::vector<double> KernelContext::formula_features(const Formula& phi) const {
  const std::size_t length = base_->front().length();
  if (!fits_horizon(phi, length)) {
    throw EvaluationError("formula horizon " + std::to_string(phi.horizon()) +
                          " exceeds base trajectory length " +
                          std::to_string(length));
  }
  std::vector<double> out;
  out.reserve(base_->size());
  for (const auto& xi : *base_) {
    const double r = robustness(phi, xi);
    out.push_back(squash_ ? std::tanh(r) : r);
  }
  return out;
}

std::vector<double> KernelContext::trajectory_features(const Trajectory& tau) const {
  std::vector<double> out;
  out.reserve(base_->size());
  for (const auto& xi : *base_) out.push_back(rho_tau(tau, xi, epsilon_));
  return out;
}

double cross_kernel(const Trajectory& tau, const Formula& phi,
                    const KernelContext& ctx) {
  return dot_mean(ctx.trajectory_features(tau), ctx.formula_features(phi));
}

double formula_kernel(const Formula& phi, const Formula& psi,
                      const KernelContext& ctx) {
  return dot_mean(ctx.formula_features(phi), ctx.formula_features(psi));
}

std::vector<double> gram_matrix(std::span<const Formula> formulas,
                                const KernelContext& ctx) {
  const std::size_t n = formulas.size();
  std::vector<std::vector<double>> features;
  features.reserve(n);
  for (const auto& f : formulas) features.push_back(ctx.formula_features(f));
  std::vector<double> gram(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      gram[i * n + j] = gram[j * n + i] = dot_mean(features[i], features[j]);
    }
  }
  return gram;
}

}  // namespace stlcc
