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

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "stlcc/error.hpp"
#include "stlcc/model.hpp"
#include "stlcc/syntax.hpp"
#include "support/model_oracles.hpp"
#include "support/oracles.hpp"
#include "support/spike.hpp"

using namespace stlcc;
using testing::random_matrix;
using testing::reference_loss;

namespace {

ConceptBank bank_of(std::initializer_list<const char*> texts) {
  ConceptBank bank;
  for (const char* t : texts) {
    bank.concepts.push_back(parse_formula(t));
    bank.costs.push_back(bank.concepts.back().size());
  }
  bank.base_length = 50;
  return bank;
}

Trajectory constant(double v, std::size_t length = 10) {
  return Trajectory(1, length, std::vector<double>(length, v));
}

}  // namespace

TEST_SUITE("model") {
  TEST_CASE("embedding is squashed robustness in bank order") {
    const ConceptBank bank = bank_of({"x0 >= 0", "not (x0 >= 0)", "F[0,3](x0 >= 1)"});
    const auto h = embed(constant(0.5), bank);
    REQUIRE(h.size() == 3);
    CHECK(h[0] == doctest::Approx(0.46211715726000974).epsilon(1e-14));
    CHECK(h[1] == -h[0]);
    CHECK(h[2] == std::tanh(-0.5));
    CHECK_THROWS_AS(embed(constant(0.5, 3), bank), HorizonError);
  }

  TEST_CASE("class statistics use the population deviation") {
    Matrix h(4, 1);
    h(0, 0) = 0.2;
    h(1, 0) = 0.4;
    h(2, 0) = 0.7;
    h(3, 0) = 0.7;
    const std::vector<std::size_t> y{0, 0, 1, 1};
    const ClassStats st = fit_stats(h, y, 2);
    CHECK(st.mean(0, 0) == doctest::Approx(0.3));
    CHECK(st.stddev(0, 0) == doctest::Approx(0.1));
    CHECK(st.stddev(1, 0) == 0.0);
    CHECK(st.complement_mean(0, 0) == st.mean(1, 0));
    CHECK(st.complement_stddev(1, 0) == doctest::Approx(0.1));
    CHECK(st.counts == std::vector<std::size_t>{2, 2});
    CHECK(st.mean.rows() == 2);
    CHECK(st.mean.cols() == 1);
  }

  TEST_CASE("complement statistics pool every other class") {
    std::mt19937_64 rng(3);
    const Matrix h = random_matrix(rng, 30, 4, 1.0);
    std::vector<std::size_t> y(30);
    for (std::size_t s = 0; s < 30; ++s) y[s] = s % 3;
    const ClassStats st = fit_stats(h, y, 3);
    for (std::size_t k = 0; k < 3; ++k) {
      for (std::size_t i = 0; i < 4; ++i) {
        double sum = 0, n = 0;
        for (std::size_t s = 0; s < 30; ++s) {
          if (y[s] != k) {
            sum += h(s, i);
            ++n;
          }
        }
        const double mean = sum / n;
        double sq = 0;
        for (std::size_t s = 0; s < 30; ++s) {
          if (y[s] != k) sq += (h(s, i) - mean) * (h(s, i) - mean);
        }
        CHECK(st.complement_mean(k, i) == doctest::Approx(mean).epsilon(1e-12));
        CHECK(st.complement_stddev(k, i) == doctest::Approx(std::sqrt(sq / n)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("fit_stats rejects empty classes and single-class data") {
    Matrix h(2, 1);
    const std::vector<std::size_t> y{0, 0};
    CHECK_THROWS_AS(fit_stats(h, y, 2), DataError);
    CHECK_THROWS_AS(fit_stats(h, y, 1), DataError);
  }

  TEST_CASE("discriminability examples") {
    ClassStats st;
    st.num_classes = 2;
    st.num_concepts = 1;
    st.mean = st.stddev = st.complement_mean = st.complement_stddev = Matrix(2, 1);
    st.complement_mean(0, 0) = 0.5;
    st.complement_stddev(0, 0) = 0.2;
    st.complement_mean(1, 0) = 0.9;
    st.complement_stddev(1, 0) = 0.0;
    st.epsilon_g = 1e-6;
    const std::vector<double> h{0.9};
    const Matrix g = discriminability(h, st);
    CHECK(g(0, 0) == doctest::Approx(1.99999).epsilon(1e-4));
    CHECK(g(1, 0) == 0.0);
    const std::vector<double> h2{1.0};
    CHECK(discriminability(h2, st)(0, 1) == doctest::Approx(0.1 / 1e-6).epsilon(1e-9));
  }

  TEST_CASE("attention examples") {
    const auto a = attention(std::vector<double>{1, 1, 1}, 1.0);
    for (double v : a) CHECK(v == doctest::Approx(1.0 / 3).epsilon(1e-15));
    const auto b = attention(std::vector<double>{2, 0}, 1.0);
    CHECK(b[0] == doctest::Approx(std::exp(2.0) / (std::exp(2.0) + 1)).epsilon(1e-14));
    CHECK(b[1] == doctest::Approx(1 / (std::exp(2.0) + 1)).epsilon(1e-14));
    const auto c = attention(std::vector<double>{0.9, -0.7, 0.1}, 1e6);
    for (double v : c) CHECK(std::abs(v - 1.0 / 3) <= 1e-5);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0.0, 30.0);
    for (int t = 0; t < 100; ++t) {
      std::vector<double> h(7);
      for (double& v : h) v = n(rng);
      double sum = 0;
      for (double v : attention(h, 0.3)) {
        CHECK(v >= 0);
        sum += v;
      }
      CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
  }

  TEST_CASE("forward pass matches a hand-rolled computation") {
    std::mt19937_64 rng(5);
    ConceptModel m;
    m.bank = bank_of({"x0 >= 0.1", "F[0,4](x0 <= -0.3)", "G[1,3](x0 >= -1)"});
    testing::FormulaGen gen(5, 1, 3);
    Dataset train;
    train.class_names = {"a", "b"};
    for (int s = 0; s < 12; ++s) {
      train.samples.push_back(testing::random_trajectory(gen.rng(), 1, 10));
      train.labels.push_back(s % 2);
    }
    m.stats = fit_stats(train, m.bank);
    m.t_attn = 0.7;
    m.weights = random_matrix(rng, 2, 6, 1.0);
    m.bias = {0.2, -0.1};
    const Trajectory x = testing::random_trajectory(gen.rng(), 1, 10);
    const ForwardPass pass = forward(x, m);

    std::vector<double> h(3), e(3);
    double denom = 0;
    for (int i = 0; i < 3; ++i) {
      h[i] = std::tanh(testing::oracle_robustness(m.bank.concepts[i], x, 0));
      e[i] = std::exp(h[i] / 0.7);
      denom += e[i];
    }
    for (int c = 0; c < 2; ++c) {
      double logit = m.bias[c];
      for (int i = 0; i < 3; ++i) {
        for (int k = 0; k < 2; ++k) {
          const double g = (h[i] - m.stats.complement_mean(k, i)) /
                           (m.stats.complement_stddev(k, i) + m.stats.epsilon_g);
          const double z = e[i] / denom * g;
          CHECK(pass.scores(i, k) == doctest::Approx(z).epsilon(1e-12));
          CHECK(pass.scores(i, k) == pass.attention[i] * pass.discriminability(i, k));
          logit += m.weights(c, i * 2 + k) * z;
        }
      }
      CHECK(pass.logits[c] == doctest::Approx(logit).epsilon(1e-12));
    }
    // Same input, same bits, whatever else was evaluated in between.
    (void)forward(train.samples[0], m);
    const ForwardPass again = forward(x, m);
    CHECK(again.logits == pass.logits);
    CHECK(again.discriminability == pass.discriminability);
  }

  TEST_CASE("uniform attention divides discriminability by n") {
    ConceptModel m;
    m.bank = bank_of({"x0 >= 0", "x0 >= 1"});
    Matrix h(2, 2);
    h(0, 0) = 0.1;
    h(1, 0) = 0.3;
    h(0, 1) = -0.2;
    h(1, 1) = 0.4;
    m.stats = fit_stats(h, std::vector<std::size_t>{0, 1}, 2);
    m.t_attn = 1.0;
    m.weights = Matrix(2, 4);
    m.bias = {0.5, -0.5};
    const ForwardPass p = forward_from_embedding({0.25, 0.25}, m);
    for (int i = 0; i < 2; ++i) {
      for (int k = 0; k < 2; ++k) CHECK(p.scores(i, k) == p.discriminability(i, k) / 2);
    }
    CHECK(p.predicted == 0);
    m.bias = {0.0, 0.0};
    CHECK(forward_from_embedding({0.9, -0.9}, m).predicted == 0);  // tie
  }

  TEST_CASE("analytic gradient agrees with central differences") {
    std::mt19937_64 rng(7);
    const std::size_t n = 5, K = 3, N = 20;
    const Matrix x = random_matrix(rng, N, n * K, 1.0);
    std::vector<std::size_t> y(N);
    for (std::size_t s = 0; s < N; ++s) y[s] = rng() % K;
    Matrix w = random_matrix(rng, K, n * K, 0.5);
    std::vector<double> b{0.1, -0.2, 0.3};
    const double l2 = 0.01;
    Matrix gw;
    std::vector<double> gb;
    const double loss = loss_and_gradient(x, y, w, b, l2, &gw, &gb);
    CHECK(loss == doctest::Approx(reference_loss(x, y, w, b, l2)).epsilon(1e-12));
    const double worst = testing::max_gradient_error(x, y, w, b, l2, gw, gb);
    CHECK(worst < 1e-6);
  }

  TEST_CASE("separable features reach full training accuracy") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> noise(0.0, 0.3);
    Matrix x(60, 4);
    std::vector<std::size_t> y(60);
    for (std::size_t s = 0; s < 60; ++s) {
      y[s] = s % 2;
      x(s, 0) = (y[s] ? 1.0 : -1.0) + 0.2 * noise(rng);
      for (std::size_t j = 1; j < 4; ++j) x(s, j) = noise(rng);
    }
    const LinearHead head = fit_linear_head(x, y, 2, TrainingConfig{});
    CHECK(head.summary.final_accuracy == 1.0);
  }

  TEST_CASE("loss never increases across epochs") {
    std::mt19937_64 rng(9);
    const Matrix x = random_matrix(rng, 40, 6, 1.0);
    std::vector<std::size_t> y(40);
    for (std::size_t s = 0; s < 40; ++s) y[s] = rng() % 3;
    TrainingConfig cfg;
    cfg.learning_rate = 50.0;  // deliberately too large; halving must kick in
    double previous = INFINITY;
    for (std::size_t epochs : {0, 1, 2, 5, 10, 50, 200}) {
      cfg.epochs = epochs;
      const LinearHead head = fit_linear_head(x, y, 3, cfg);
      CHECK(head.summary.final_loss <= previous);
      previous = head.summary.final_loss;
    }
  }

  TEST_CASE("huge l2 collapses to the bias argmax") {
    std::mt19937_64 rng(10);
    const Matrix x = random_matrix(rng, 30, 4, 1.0);
    std::vector<std::size_t> y(30, 0);
    for (std::size_t s = 0; s < 10; ++s) y[s] = 1;
    TrainingConfig cfg;
    cfg.l2 = 1e6;
    const LinearHead head = fit_linear_head(x, y, 2, cfg);
    for (double w : head.weights.data()) CHECK(std::abs(w) < 1e-6);
    CHECK(head.bias[0] > head.bias[1]);
    CHECK(head.summary.final_accuracy == doctest::Approx(20.0 / 30));
  }

  TEST_CASE("zero and random initialisations reach the same loss") {
    const Dataset data = testing::spike_dataset(80, 30, 4);
    const ConceptBank bank = bank_of({"F[0,29](x0 >= 0.8)", "G[0,10](x0 <= 0.3)", "x0 >= 0",
                                      "(x0 >= -0.2) U[2,9] (x0 >= 0.5)"});
    TrainingConfig a, b;
    b.init_scale = 1.0;
    b.seed = 99;
    const ConceptModel ma = train(data, bank, a);
    const ConceptModel mb = train(data, bank, b);
    CHECK(std::abs(ma.summary.final_loss - mb.summary.final_loss) <= 1e-3);
  }

  TEST_CASE("train records metadata and rejects bad input") {
    const Dataset data = testing::spike_dataset(40, 30, 5);
    const ConceptBank bank = bank_of({"F[0,29](x0 >= 0.8)", "x0 >= 0"});
    const ConceptModel m = train(data, bank, TrainingConfig{});
    CHECK(m.class_names == data.class_names);
    CHECK(m.weights.rows() == 2);
    CHECK(m.weights.cols() == 4);
    CHECK(m.summary.final_accuracy == 1.0);
    for (double w : m.weights.data()) CHECK(std::isfinite(w));

    Dataset one = data;
    one.class_names = {"0"};
    for (auto& l : one.labels) l = 0;
    CHECK_THROWS_AS(train(one, bank, TrainingConfig{}), DataError);
    TrainingConfig bad;
    bad.t_attn = 0;
    CHECK_THROWS_AS(train(data, bank, bad), ConfigError);
    CHECK_THROWS_AS(train(data, ConceptBank{}, TrainingConfig{}), ConfigError);
  }
}
