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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stlcc/concept_bank.hpp"
#include "stlcc/dataset.hpp"
#include "stlcc/matrix.hpp"
#include "stlcc/trajectory.hpp"

namespace stlcc {

// Robustness statistics of the training set, per class and per complement
// ("every class but k") pool.
struct ClassStats {
  std::size_t num_classes = 0;
  std::size_t num_concepts = 0;
  // K x n, population moments of the embedding over class k.
  Matrix mean;
  Matrix stddev;
  // K x n, the same moments over all samples not in class k.
  Matrix complement_mean;
  Matrix complement_stddev;
  std::vector<std::size_t> counts;
  double epsilon_g = 1e-6;

  bool operator==(const ClassStats&) const = default;
};

struct TrainingConfig {
  double t_attn = 1.0;
  double epsilon_g = 1e-6;
  std::size_t epochs = 500;
  double learning_rate = 0.1;
  double l2 = 1e-4;
  std::uint64_t seed = 0;
  // Standard deviation of a Normal initialization of W and the bias; zero
  // (the default) starts from all zeros.
  double init_scale = 0.0;
  // Step multiplier after an accepted step; 1 gives plain halving-only control.
  double step_growth = 1.1;

  void validate() const;
  bool operator==(const TrainingConfig&) const = default;
};

struct TrainingSummary {
  std::size_t epochs_run = 0;
  double final_loss = 0.0;
  double final_accuracy = 0.0;
  double final_learning_rate = 0.0;

  bool operator==(const TrainingSummary&) const = default;
};

// Concept bank, class statistics and linear head. W is K x (n * K) and reads
// the flattened modulated scores with index(i, k) = i * K + k.
struct ConceptModel {
  ConceptBank bank;
  ClassStats stats;
  Matrix weights;
  std::vector<double> bias;
  double t_attn = 1.0;
  TrainingConfig training;
  TrainingSummary summary;
  std::vector<std::string> class_names;
  std::optional<NormalizationRecord> normalization;

  std::size_t num_classes() const { return bias.size(); }
  std::size_t num_concepts() const { return bank.size(); }
};

inline std::size_t flat_index(std::size_t concept_index, std::size_t k,
                              std::size_t num_classes) {
  return concept_index * num_classes + k;
}

// H_x[i] = tanh(rho(phi_i, x, 0)). Throws HorizonError when a concept does not
// fit x.
std::vector<double> embed(const Trajectory& x, const ConceptBank& bank);

// Per-class and complement moments of the given embeddings (one row per
// sample). Throws DataError for fewer than two classes or an empty class.
ClassStats fit_stats(const Matrix& embeddings, std::span<const std::size_t> labels,
                     std::size_t num_classes, double epsilon_g = 1e-6);
ClassStats fit_stats(const Dataset& dataset, const ConceptBank& bank,
                     double epsilon_g = 1e-6);

// G[i][k] = (H[i] - complement_mean[k][i]) / (complement_stddev[k][i] + eps_G).
Matrix discriminability(std::span<const double> h, const ClassStats& stats);

// softmax(H / T) with max subtraction. Throws ConfigError for T <= 0.
std::vector<double> attention(std::span<const double> h, double t_attn);

struct ForwardPass {
  std::vector<double> embedding;  // H, length n
  std::vector<double> attention;  // alpha, length n
  Matrix discriminability;        // G, n x K
  Matrix scores;                  // z, n x K
  std::vector<double> logits;     // length K
  std::size_t predicted = 0;      // argmax, smallest index on ties
};

// Everything after the embedding. Exposed so that callers holding a
// precomputed embedding skip the robustness evaluation.
ForwardPass forward_from_embedding(std::vector<double> h, const ConceptModel& model);
ForwardPass forward(const Trajectory& x, const ConceptModel& model);

// Flattened z (length n * K) for a given embedding.
std::vector<double> modulated_features(std::span<const double> h,
                                       const ClassStats& stats, double t_attn);

// Mean softmax cross-entropy plus l2 * ||W||^2 (bias unregularized) over the
// rows of `features`, with its gradient when the output pointers are set.
double loss_and_gradient(const Matrix& features, std::span<const std::size_t> labels,
                         const Matrix& weights, std::span<const double> bias,
                         double l2, Matrix* grad_weights = nullptr,
                         std::vector<double>* grad_bias = nullptr);

// Full-batch gradient descent on (W, bias) over fixed features. A step that
// would raise the loss is retried with half the learning rate, so the loss
// sequence never increases. Throws Error when the loss becomes non-finite.
struct LinearHead {
  Matrix weights;
  std::vector<double> bias;
  TrainingSummary summary;
};
LinearHead fit_linear_head(const Matrix& features, std::span<const std::size_t> labels,
                           std::size_t num_classes, const TrainingConfig& cfg);

// Fits statistics, precomputes z for every sample and trains the head. The
// bank must already match the dataset's length. Throws DataError for fewer
// than two classes present.
ConceptModel train(const Dataset& train_set, const ConceptBank& bank,
                   const TrainingConfig& cfg);

// Embedding of every sample, one row each.
Matrix embed_all(const Dataset& dataset, const ConceptBank& bank);

}  // namespace stlcc
