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

// Run configuration for the command-line tool, read from a TOML file with
// one table per section.

#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "stlcc/concept_bank.hpp"
#include "stlcc/explain.hpp"
#include "stlcc/measure.hpp"
#include "stlcc/model.hpp"

namespace stlcc::cli {

struct ExplainSettings {
  SelectionMode mode;
  double coverage_target = 0.95;
  double leakage_max = 0.10;
};

struct KernelSettings {
  std::optional<double> epsilon;  // median heuristic when unset
  bool squash = true;
};

struct IoPaths {
  std::string train;
  std::string test;
  std::string bank;
  std::string model;
  std::string report;
};

struct RunConfig {
  MeasureConfig measure;
  GrammarConfig grammar;
  SelectionConfig selection;
  TrainingConfig model;
  ExplainSettings explain;
  KernelSettings kernel;
  IoPaths io;
};

// Throws ConfigError naming the line for syntax errors, unknown sections or
// keys, and ill-typed values.
RunConfig parse_run_config(std::string_view text);

// Sets `section.key` from a command-line value given in TOML syntax; text
// that does not parse as a TOML value is taken as a plain string.
void apply_override(RunConfig& cfg, std::string_view dotted_key, std::string_view value);

}  // namespace stlcc::cli
