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

namespace stlcc {

// A uniformly sampled multivariate signal with `dims` variables and `length`
// samples, stored variable-major: value(d, t) = values[d * length + t].
class Trajectory {
 public:
  Trajectory() = default;

  // Zero-filled trajectory. Throws DataError if dims or length is zero.
  Trajectory(std::size_t dims, std::size_t length, double sample_period = 1.0);

  // Takes ownership of `values` (size dims * length). Throws DataError on a
  // size mismatch, zero dims/length, non-finite values or a non-positive
  // sample period.
  Trajectory(std::size_t dims, std::size_t length, std::vector<double> values,
             double sample_period = 1.0);

  // One row per variable; all rows must have the same non-zero length.
  static Trajectory from_rows(const std::vector<std::vector<double>>& rows,
                              double sample_period = 1.0);

  std::size_t dims() const { return dims_; }
  std::size_t length() const { return length_; }
  double sample_period() const { return sample_period_; }

  double operator()(std::size_t dim, std::size_t t) const {
    return values_[dim * length_ + t];
  }
  double& operator()(std::size_t dim, std::size_t t) {
    return values_[dim * length_ + t];
  }

  std::span<const double> row(std::size_t dim) const {
    return {values_.data() + dim * length_, length_};
  }
  std::span<double> row(std::size_t dim) {
    return {values_.data() + dim * length_, length_};
  }

  const std::vector<double>& values() const { return values_; }

  bool operator==(const Trajectory&) const = default;

 private:
  std::size_t dims_ = 0;
  std::size_t length_ = 0;
  std::vector<double> values_;
  double sample_period_ = 1.0;
};

// Sum of squared element-wise differences. Throws DataError on shape mismatch.
double squared_distance(const Trajectory& a, const Trajectory& b);

}  // namespace stlcc
