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

#include "stlcc/trajectory.hpp"

#include <cmath>
#include <string>

#include "stlcc/error.hpp"

namespace stlcc {

Trajectory::Trajectory(std::size_t dims, std::size_t length,
                       double sample_period)
    : Trajectory(dims, length, std::vector<double>(dims * length, 0.0),
                 sample_period) {}

Trajectory::Trajectory(std::size_t dims, std::size_t length,
                       std::vector<double> values, double sample_period)
    : dims_(dims),
      length_(length),
      values_(std::move(values)),
      sample_period_(sample_period) {
  if (dims_ == 0 || length_ == 0) {
    throw DataError("trajectory must have at least one variable and one sample");
  }
  if (values_.size() != dims_ * length_) {
    throw DataError("trajectory value count " + std::to_string(values_.size()) +
                    " does not match " + std::to_string(dims_) + "x" +
                    std::to_string(length_));
  }
  if (!(sample_period_ > 0.0) || !std::isfinite(sample_period_)) {
    throw DataError("sample period must be positive");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw DataError("trajectory contains a non-finite value");
  }
}

Trajectory Trajectory::from_rows(const std::vector<std::vector<double>>& rows,
                                 double sample_period) {
  if (rows.empty()) throw DataError("trajectory must have at least one variable");
  const std::size_t length = rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * length);
  for (const auto& r : rows) {
    if (r.size() != length) {
      throw DataError("all variables of a trajectory must have the same length");
    }
    values.insert(values.end(), r.begin(), r.end());
  }
  return Trajectory(rows.size(), length, std::move(values), sample_period);
}

double squared_distance(const Trajectory& a, const Trajectory& b) {
  if (a.dims() != b.dims() || a.length() != b.length()) {
    throw DataError("trajectory shape mismatch");
  }
  double sum = 0.0;
  const auto& va = a.values();
  const auto& vb = b.values();
  for (std::size_t i = 0; i < va.size(); ++i) {
    const double d = va[i] - vb[i];
    sum += d * d;
  }
  return sum;
}

}  // namespace stlcc
