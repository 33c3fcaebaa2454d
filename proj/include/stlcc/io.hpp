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

// JSON persistence for concept banks, trained models and explanation
// reports. Output is byte-deterministic: fixed key order, shortest
// round-trip formatting of doubles.

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stlcc/concept_bank.hpp"
#include "stlcc/explain.hpp"
#include "stlcc/model.hpp"

namespace stlcc {

inline constexpr int kFormatVersion = 1;

std::string serialize_bank(const ConceptBank& bank, bool with_signatures = true);
// Signatures absent from the document are recomputed from the measure.
ConceptBank parse_bank(std::string_view text);

std::string serialize_model(const ConceptModel& model);
ConceptModel parse_model(std::string_view text);

struct LocalReport {
  std::size_t sample_id = 0;
  std::optional<std::size_t> true_label;
  LocalExplanation explanation;
};

struct ExplanationReport {
  std::vector<std::string> class_names;
  std::vector<LocalReport> local;
  std::vector<GlobalExplanation> global;
};

std::string serialize_report(const ExplanationReport& report);

// Whole-file helpers; both throw Error naming the path on failure.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

ConceptBank load_bank(const std::filesystem::path& path);
void save_bank(const std::filesystem::path& path, const ConceptBank& bank);
ConceptModel load_model(const std::filesystem::path& path);
void save_model(const std::filesystem::path& path, const ConceptModel& model);

}  // namespace stlcc
