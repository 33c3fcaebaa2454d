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

#include "stlcc/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "stlcc/error.hpp"
#include "stlcc/monitor.hpp"

namespace stlcc {

void TrainingConfig::validate() const {
  if (!(t_attn > 0.0)) throw ConfigError("model: T_attn must be positive");
  if (!(epsilon_g > 0.0)) throw ConfigError("model: epsilon_G must be positive");
  if (!(learning_rate > 0.0)) throw ConfigError("model: learning rate must be positive");
  if (!(l2 >= 0.0)) throw ConfigError("model: l2 must be non-negative");
  if (!(init_scale >= 0.0)) throw ConfigError("model: init_scale must be non-negative");
  if (!(step_growth >= 1.0 && std::isfinite(step_growth))) {
    throw ConfigError("model: step_growth must be a finite value of at least 1");
  }
}

std::vector<double> embed(const Trajectory& x, const ConceptBank& bank) {
  std::vector<double> h;
  h.reserve(bank.size());
  for (const auto& phi : bank.concepts) {
    if (!fits_horizon(phi, x.length())) {
      throw HorizonError("concept horizon " + std::to_string(phi.horizon()) +
                         " does not fit a trajectory of length " +
                         std::to_string(x.length()) + "; rescale the bank first");
    }
    h.push_back(std::tanh(robustness(phi, x)));
  }
  return h;
}

Matrix embed_all(const Dataset& dataset, const ConceptBank& bank) {
  Matrix out(dataset.size(), bank.size());
  for (std::size_t s = 0; s < dataset.size(); ++s) {
    const auto h = embed(dataset.samples[s], bank);
    std::copy(h.begin(), h.end(), out.row(s).begin());
  }
  return out;
}

ClassStats fit_stats(const Matrix& embeddings, std::span<const std::size_t> labels,
                     std::size_t num_classes, double epsilon_g) {
  if (labels.size() != embeddings.rows()) {
    throw DataError("fit_stats: one label per embedding row required");
  }
  if (num_classes < 2) throw DataError("fit_stats: at least two classes required");
  const std::size_t n = embeddings.cols();
  ClassStats st;
  st.num_classes = num_classes;
  st.num_concepts = n;
  st.epsilon_g = epsilon_g;
  st.counts.assign(num_classes, 0);
  for (std::size_t y : labels) {
    if (y >= num_classes) throw DataError("fit_stats: label out of range");
    ++st.counts[y];
  }
  for (std::size_t k = 0; k < num_classes; ++k) {
    if (st.counts[k] == 0) {
      throw DataError("fit_stats: class " + std::to_string(k) + " has no samples");
    }
  }
  st.mean = Matrix(num_classes, n);
  st.stddev = Matrix(num_classes, n);
  st.complement_mean = Matrix(num_classes, n);
  st.complement_stddev = Matrix(num_classes, n);
  const std::size_t total = labels.size();
  for (std::size_t k = 0; k < num_classes; ++k) {
    const double in_count = static_cast<double>(st.counts[k]);
    const double out_count = static_cast<double>(total - st.counts[k]);
    for (std::size_t i = 0; i < n; ++i) {
      double in_sum = 0.0, out_sum = 0.0;
      for (std::size_t s = 0; s < total; ++s) {
        (labels[s] == k ? in_sum : out_sum) += embeddings(s, i);
      }
      const double in_mean = in_sum / in_count;
      const double out_mean = out_sum / out_count;
      double in_sq = 0.0, out_sq = 0.0;
      for (std::size_t s = 0; s < total; ++s) {
        const double v = embeddings(s, i);
        if (labels[s] == k) {
          in_sq += (v - in_mean) * (v - in_mean);
        } else {
          out_sq += (v - out_mean) * (v - out_mean);
        }
      }
      st.mean(k, i) = in_mean;
      st.stddev(k, i) = std::sqrt(in_sq / in_count);
      st.complement_mean(k, i) = out_mean;
      st.complement_stddev(k, i) = std::sqrt(out_sq / out_count);
    }
  }
  return st;
}

ClassStats fit_stats(const Dataset& dataset, const ConceptBank& bank,
                     double epsilon_g) {
  dataset.validate();
  return fit_stats(embed_all(dataset, bank), dataset.labels,
                   dataset.num_classes(), epsilon_g);
}

Matrix discriminability(std::span<const double> h, const ClassStats& stats) {
  if (h.size() != stats.num_concepts) {
    throw DataError("discriminability: embedding has " + std::to_string(h.size()) +
                    " entries, statistics cover " +
                    std::to_string(stats.num_concepts) + " concepts");
  }
  const std::size_t K = stats.num_classes;
  Matrix g(h.size(), K);
  for (std::size_t i = 0; i < h.size(); ++i) {
    for (std::size_t k = 0; k < K; ++k) {
      g(i, k) = (h[i] - stats.complement_mean(k, i)) /
                (stats.complement_stddev(k, i) + stats.epsilon_g);
    }
  }
  return g;
}

std::vector<double> attention(std::span<const double> h, double t_attn) {
  if (!(t_attn > 0.0)) throw ConfigError("attention: temperature must be positive");
  std::vector<double> a(h.size());
  if (h.empty()) return a;
  const double top = *std::max_element(h.begin(), h.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    a[i] = std::exp((h[i] - top) / t_attn);
    sum += a[i];
  }
  for (double& v : a) v /= sum;
  return a;
}

std::vector<double> modulated_features(std::span<const double> h,
                                       const ClassStats& stats, double t_attn) {
  const Matrix g = discriminability(h, stats);
  const auto alpha = attention(h, t_attn);
  const std::size_t K = stats.num_classes;
  std::vector<double> z(h.size() * K);
  for (std::size_t i = 0; i < h.size(); ++i) {
    for (std::size_t k = 0; k < K; ++k) z[flat_index(i, k, K)] = alpha[i] * g(i, k);
  }
  return z;
}

ForwardPass forward_from_embedding(std::vector<double> h, const ConceptModel& model) {
  ForwardPass out;
  const std::size_t K = model.num_classes();
  out.discriminability = discriminability(h, model.stats);
  out.attention = attention(h, model.t_attn);
  out.scores = Matrix(h.size(), K);
  for (std::size_t i = 0; i < h.size(); ++i) {
    for (std::size_t k = 0; k < K; ++k) {
      out.scores(i, k) = out.attention[i] * out.discriminability(i, k);
    }
  }
  out.logits = model.bias;
  for (std::size_t c = 0; c < K; ++c) {
    double acc = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      for (std::size_t k = 0; k < K; ++k) {
        acc += model.weights(c, flat_index(i, k, K)) * out.scores(i, k);
      }
    }
    out.logits[c] += acc;
  }
  out.predicted = static_cast<std::size_t>(
      std::max_element(out.logits.begin(), out.logits.end()) - out.logits.begin());
  out.embedding = std::move(h);
  return out;
}

ForwardPass forward(const Trajectory& x, const ConceptModel& model) {
  return forward_from_embedding(embed(x, model.bank), model);
}

namespace {

void logits_into(std::span<const double> f, const Matrix& w,
                 std::span<const double> b, std::vector<double>& out) {
  out.assign(b.begin(), b.end());
  for (std::size_t c = 0; c < w.rows(); ++c) {
    const auto row = w.row(c);
    double acc = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) acc += row[j] * f[j];
    out[c] += acc;
  }
}

// In-place softmax; returns log-sum-exp.
double softmax_inplace(std::vector<double>& v) {
  const double top = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double& x : v) {
    x = std::exp(x - top);
    sum += x;
  }
  for (double& x : v) x /= sum;
  return top + std::log(sum);
}

}  // namespace

double loss_and_gradient(const Matrix& features, std::span<const std::size_t> labels,
                         const Matrix& weights, std::span<const double> bias,
                         double l2, Matrix* grad_weights,
                         std::vector<double>* grad_bias) {
  const std::size_t N = features.rows();
  const std::size_t K = weights.rows();
  if (N == 0 || labels.size() != N || bias.size() != K ||
      weights.cols() != features.cols()) {
    throw DataError("loss: inconsistent dimensions");
  }
  if (grad_weights) *grad_weights = Matrix(K, weights.cols());
  if (grad_bias) grad_bias->assign(K, 0.0);
  const double inv_n = 1.0 / static_cast<double>(N);
  double loss = 0.0;
  std::vector<double> p;
  for (std::size_t s = 0; s < N; ++s) {
    const auto f = features.row(s);
    logits_into(f, weights, bias, p);
    const double z_true = p[labels[s]];
    const double lse = softmax_inplace(p);
    loss += (lse - z_true) * inv_n;
    if (!grad_weights && !grad_bias) continue;
    p[labels[s]] -= 1.0;
    for (std::size_t c = 0; c < K; ++c) {
      const double delta = p[c] * inv_n;
      if (grad_bias) (*grad_bias)[c] += delta;
      if (grad_weights) {
        auto g = grad_weights->row(c);
        for (std::size_t j = 0; j < f.size(); ++j) g[j] += delta * f[j];
      }
    }
  }
  double sq = 0.0;
  for (double w : weights.data()) sq += w * w;
  loss += l2 * sq;
  if (grad_weights) {
    auto& g = grad_weights->data();
    const auto& w = weights.data();
    for (std::size_t j = 0; j < g.size(); ++j) g[j] += 2.0 * l2 * w[j];
  }
  return loss;
}

LinearHead fit_linear_head(const Matrix& features, std::span<const std::size_t> labels,
                           std::size_t num_classes, const TrainingConfig& cfg) {
  cfg.validate();
  LinearHead head;
  head.weights = Matrix(num_classes, features.cols());
  head.bias.assign(num_classes, 0.0);
  if (cfg.init_scale > 0.0) {
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, cfg.init_scale);
    for (double& w : head.weights.data()) w = normal(rng);
    for (double& b : head.bias) b = normal(rng);
  }

  Matrix gw, trial_gw;
  std::vector<double> gb, trial_gb;
  double loss = loss_and_gradient(features, labels, head.weights, head.bias, cfg.l2,
                                  &gw, &gb);
  if (!std::isfinite(loss)) throw Error("training: initial loss is not finite");
  double lr = cfg.learning_rate;
  const double lr_floor = cfg.learning_rate * 1e-15;
  std::size_t epoch = 0;
  Matrix trial_w = head.weights;
  std::vector<double> trial_b = head.bias;
  for (; epoch < cfg.epochs; ++epoch) {
    bool accepted = false;
    while (lr >= lr_floor) {
      for (std::size_t j = 0; j < gw.data().size(); ++j) {
        trial_w.data()[j] = head.weights.data()[j] - lr * gw.data()[j];
      }
      for (std::size_t c = 0; c < num_classes; ++c) trial_b[c] = head.bias[c] - lr * gb[c];
      const double trial = loss_and_gradient(features, labels, trial_w, trial_b,
                                             cfg.l2, &trial_gw, &trial_gb);
      if (std::isfinite(trial) && trial <= loss) {
        std::swap(head.weights, trial_w);
        std::swap(head.bias, trial_b);
        std::swap(gw, trial_gw);
        std::swap(gb, trial_gb);
        loss = trial;
        accepted = true;
        lr *= cfg.step_growth;
        break;
      }
      lr *= 0.5;
    }
    if (!accepted) break;  // no descent step left at any usable learning rate
  }
  if (!std::isfinite(loss)) throw Error("training: loss became non-finite");

  std::size_t correct = 0;
  std::vector<double> logits;
  for (std::size_t s = 0; s < features.rows(); ++s) {
    logits_into(features.row(s), head.weights, head.bias, logits);
    const auto pred = static_cast<std::size_t>(
        std::max_element(logits.begin(), logits.end()) - logits.begin());
    correct += pred == labels[s];
  }
  head.summary.epochs_run = epoch;
  head.summary.final_loss = loss;
  head.summary.final_accuracy =
      static_cast<double>(correct) / static_cast<double>(features.rows());
  head.summary.final_learning_rate = lr;
  return head;
}

ConceptModel train(const Dataset& train_set, const ConceptBank& bank,
                   const TrainingConfig& cfg) {
  cfg.validate();
  train_set.validate();
  if (train_set.num_classes() < 2) {
    throw DataError("training needs at least two classes");
  }
  if (bank.size() == 0) throw ConfigError("training needs a non-empty concept bank");
  const Matrix h = embed_all(train_set, bank);
  ConceptModel model;
  model.bank = bank;
  model.stats = fit_stats(h, train_set.labels, train_set.num_classes(), cfg.epsilon_g);
  model.t_attn = cfg.t_attn;
  model.training = cfg;
  model.class_names = train_set.class_names;
  model.normalization = train_set.normalization;

  const std::size_t K = train_set.num_classes();
  Matrix features(train_set.size(), bank.size() * K);
  for (std::size_t s = 0; s < train_set.size(); ++s) {
    const auto z = modulated_features(h.row(s), model.stats, cfg.t_attn);
    std::copy(z.begin(), z.end(), features.row(s).begin());
  }
  LinearHead head = fit_linear_head(features, train_set.labels, K, cfg);
  model.weights = std::move(head.weights);
  model.bias = std::move(head.bias);
  model.summary = head.summary;
  return model;
}

}  // namespace stlcc
