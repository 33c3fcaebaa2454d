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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "stlcc/trajectory.hpp"

namespace stlcc {

// Per-variable moments of a training split.
struct NormalizationRecord {
  std::vector<double> mean;
  std::vector<double> stddev;

  bool operator==(const NormalizationRecord&) const = default;
};

// Labeled fixed-length trajectories. Labels are dense 0-based indices into
// class_names, which holds the original label tokens in sorted order.
struct Dataset {
  std::vector<Trajectory> samples;
  std::vector<std::size_t> labels;
  std::vector<std::string> class_names;
  // Set once the dataset has been standardized.
  std::optional<NormalizationRecord> normalization;

  std::size_t size() const { return samples.size(); }
  std::size_t num_classes() const { return class_names.size(); }
  std::size_t dims() const { return samples.empty() ? 0 : samples.front().dims(); }
  std::size_t length() const { return samples.empty() ? 0 : samples.front().length(); }

  // Throws DataError unless all samples share one shape and every label is
  // below num_classes().
  void validate() const;

  bool operator==(const Dataset&) const = default;
};

// UCR-style text: one sample per line, `<label>\t<v1>\t...\t<vT>`. Fields may
// also be separated by commas or spaces.
//
// Labels are remapped to dense indices in sorted order (numeric when every
// label is a number, lexicographic otherwise). When `known_classes` is given
// the mapping is taken from it instead, and a label outside it is an error.
Dataset load_ucr_tsv(const std::filesystem::path& path,
                     const std::vector<std::string>* known_classes = nullptr);
void write_ucr_tsv(const Dataset& dataset, const std::filesystem::path& path);

// Minimal multivariate container:
//   {"version": 1, "labels": [...], "samples": [[[x_0(0), ...], ...], ...]}
// with samples[s][d][t]. Labels may be numbers or strings.
Dataset load_multivariate_json(const std::filesystem::path& path,
                               const std::vector<std::string>* known_classes = nullptr);
void write_multivariate_json(const Dataset& dataset,
                             const std::filesystem::path& path);

// Picks the JSON container for a `.json` extension and UCR text otherwise.
Dataset load_dataset(const std::filesystem::path& path,
                     const std::vector<std::string>* known_classes = nullptr);

enum class Standardization { kFit, kApply };

// Population mean/std per variable over all samples and time steps.
NormalizationRecord fit_normalization(const Dataset& dataset);

// (x - mean) / max(std, 1e-8) per variable. kFit derives the record from
// `dataset`; kApply uses `record` and throws ConfigError when it is null. The
// record used is stored in the result.
Dataset standardize(const Dataset& dataset, Standardization mode,
                    const NormalizationRecord* record = nullptr);

}  // namespace stlcc
