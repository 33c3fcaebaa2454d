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
#include <vector>

#include "doctest.h"
#include "stlcc/error.hpp"
#include "stlcc/measure.hpp"

using namespace stlcc;

namespace {

// Equispaced knot indices, first at 0 and last at T-1, rounded half up.
std::vector<std::size_t> expected_knots(std::size_t K, std::size_t T) {
  std::vector<std::size_t> pos;
  for (std::size_t j = 0; j < K; ++j) {
    pos.push_back(static_cast<std::size_t>(
        std::floor(static_cast<double>(j) * static_cast<double>(T - 1) /
                       static_cast<double>(K - 1) + 0.5)));
  }
  return pos;
}

}  // namespace

TEST_SUITE("measure") {
  TEST_CASE("same seed gives bit-identical samples") {
    MeasureConfig cfg;
    cfg.num_trajectories = 3;
    cfg.length = 10;
    cfg.seed = 42;
    const auto a = sample_measure(cfg);
    const auto b = sample_measure(cfg);
    REQUIRE(a.size() == 3);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    cfg.seed = 43;
    CHECK_FALSE(sample_measure(cfg)[0] == a[0]);
  }

  TEST_CASE("trajectory i does not depend on how many are drawn") {
    MeasureConfig small, large;
    small.num_trajectories = 3;
    large.num_trajectories = 7;
    small.length = large.length = 20;
    const auto a = sample_measure(small);
    const auto b = sample_measure(large);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  }

  TEST_CASE("shape and finiteness") {
    MeasureConfig cfg;
    cfg.num_trajectories = 5;
    cfg.length = 17;
    cfg.dims = 3;
    cfg.num_knots = 4;
    for (const auto& tau : sample_measure(cfg)) {
      CHECK(tau.dims() == 3);
      CHECK(tau.length() == 17);
      for (double v : tau.values()) CHECK(std::isfinite(v));
    }
  }

  TEST_CASE("knot placement matches equispaced rounding") {
    for (std::size_t T : {2, 5, 10, 17, 50, 151}) {
      for (std::size_t K = 2; K <= std::min<std::size_t>(T, 12); ++K) {
        const auto want = expected_knots(K, T);
        for (std::size_t j = 0; j < K; ++j) CHECK(knot_position(j, K, T) == want[j]);
      }
    }
  }

  TEST_CASE("paths are linear between knots") {
    MeasureConfig cfg;
    cfg.num_trajectories = 20;
    cfg.length = 50;
    cfg.dims = 2;
    cfg.num_knots = 7;
    const auto knots = expected_knots(7, 50);
    for (const auto& tau : sample_measure(cfg)) {
      for (std::size_t d = 0; d < 2; ++d) {
        for (std::size_t j = 0; j + 1 < knots.size(); ++j) {
          const double v0 = tau(d, knots[j]), v1 = tau(d, knots[j + 1]);
          for (std::size_t t = knots[j]; t <= knots[j + 1]; ++t) {
            const double w = static_cast<double>(t - knots[j]) /
                             static_cast<double>(knots[j + 1] - knots[j]);
            CHECK(tau(d, t) == doctest::Approx((1 - w) * v0 + w * v1).epsilon(1e-12));
          }
        }
      }
    }
  }

  TEST_CASE("one knot per index leaves raw Gaussian values") {
    MeasureConfig cfg;
    cfg.num_trajectories = 400;
    cfg.length = 10;
    cfg.num_knots = 10;
    cfg.value_std = 2.0;
    double sum = 0, sq = 0;
    std::size_t n = 0;
    for (const auto& tau : sample_measure(cfg)) {
      for (double v : tau.values()) {
        sum += v;
        sq += v * v;
        ++n;
      }
    }
    const double var = sq / n - (sum / n) * (sum / n);
    // Sample variance of 4000 normals: relative sd about sqrt(2/4000).
    CHECK(std::sqrt(var) == doctest::Approx(2.0).epsilon(0.07));
  }

  TEST_CASE("single knot gives a constant path") {
    MeasureConfig cfg;
    cfg.num_trajectories = 2;
    cfg.length = 8;
    cfg.num_knots = 1;
    for (const auto& tau : sample_measure(cfg)) {
      for (std::size_t t = 0; t < 8; ++t) CHECK(tau(0, t) == tau(0, 0));
    }
  }

  TEST_CASE("grand mean is within three standard errors of zero") {
    MeasureConfig cfg;
    cfg.num_trajectories = 1000;
    cfg.length = 50;
    cfg.dims = 2;
    const auto sample = sample_measure(cfg);
    // Each value is a fixed linear combination of iid knot values, so the
    // grand mean has variance sigma^2 / (M T^2) * sum_j c_j^2 with c_j the
    // total interpolation weight of knot j.
    const auto knots = expected_knots(cfg.num_knots, cfg.length);
    std::vector<double> c(knots.size(), 0.0);
    for (std::size_t t = 0; t < cfg.length; ++t) {
      std::size_t j = 0;
      while (j + 1 < knots.size() && knots[j + 1] <= t) ++j;
      if (j + 1 == knots.size()) {
        c[j] += 1;
        continue;
      }
      const double w = static_cast<double>(t - knots[j]) /
                       static_cast<double>(knots[j + 1] - knots[j]);
      c[j] += 1 - w;
      c[j + 1] += w;
    }
    double ssq = 0;
    for (double x : c) ssq += x * x;
    const double T = static_cast<double>(cfg.length);
    const double se = std::sqrt(ssq / (static_cast<double>(cfg.num_trajectories) * T * T));
    CHECK(3 * se <= 0.15);
    for (std::size_t d = 0; d < cfg.dims; ++d) {
      double sum = 0;
      for (const auto& tau : sample) {
        for (std::size_t t = 0; t < cfg.length; ++t) sum += tau(d, t);
      }
      const double mean = sum / (static_cast<double>(cfg.num_trajectories) * T);
      CHECK(std::abs(mean) <= 3 * se);
    }
  }

  TEST_CASE("invalid configurations are rejected") {
    MeasureConfig cfg;
    cfg.num_trajectories = 1;
    CHECK_THROWS_AS(sample_measure(cfg), ConfigError);
    cfg = {};
    cfg.num_knots = cfg.length + 1;
    CHECK_THROWS_AS(sample_measure(cfg), ConfigError);
    cfg = {};
    cfg.value_std = 0;
    CHECK_THROWS_AS(sample_measure(cfg), ConfigError);
    cfg = {};
    cfg.dims = 0;
    CHECK_THROWS_AS(sample_measure(cfg), ConfigError);
  }
}
