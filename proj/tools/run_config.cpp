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

#include "run_config.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

#include "stlcc/error.hpp"
#include "toml.hpp"

namespace stlcc::cli {
namespace {

double to_real(const toml::node& v) {
  const auto out = v.is_number() ? v.value<double>() : std::nullopt;
  if (!out || !std::isfinite(*out)) throw ConfigError("expected a finite number");
  return *out;
}

std::uint64_t to_unsigned(const toml::node& v) {
  const auto out = v.as_integer();
  if (!out || out->get() < 0) throw ConfigError("expected a non-negative integer");
  return static_cast<std::uint64_t>(out->get());
}

std::size_t to_size(const toml::node& v) {
  const std::uint64_t u = to_unsigned(v);
  if (u > std::numeric_limits<std::size_t>::max()) throw ConfigError("integer too large");
  return static_cast<std::size_t>(u);
}

bool to_bool(const toml::node& v) {
  const auto out = v.as_boolean();
  if (!out) throw ConfigError("expected true or false");
  return out->get();
}

std::string to_text(const toml::node& v) {
  const auto out = v.as_string();
  if (!out) throw ConfigError("expected a string");
  return out->get();
}

std::vector<double> to_reals(const toml::node& v) {
  const auto* arr = v.as_array();
  if (!arr) throw ConfigError("expected an array of numbers");
  std::vector<double> out;
  for (const auto& item : *arr) out.push_back(to_real(item));
  return out;
}

using Setter = std::function<void(RunConfig&, const toml::node&)>;
using V = const toml::node&;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"measure.M", [](RunConfig& c, V v) { c.measure.num_trajectories = to_size(v); }},
      {"measure.T", [](RunConfig& c, V v) { c.measure.length = to_size(v); }},
      {"measure.D", [](RunConfig& c, V v) { c.measure.dims = to_size(v); }},
      {"measure.num_knots", [](RunConfig& c, V v) { c.measure.num_knots = to_size(v); }},
      {"measure.value_std", [](RunConfig& c, V v) { c.measure.value_std = to_real(v); }},
      {"measure.seed", [](RunConfig& c, V v) { c.measure.seed = to_unsigned(v); }},
      {"grammar.max_depth", [](RunConfig& c, V v) { c.grammar.max_depth = to_size(v); }},
      {"grammar.max_vars", [](RunConfig& c, V v) { c.grammar.max_vars_per_formula = to_size(v); }},
      {"grammar.probabilities",
       [](RunConfig& c, V v) {
         const auto p = to_reals(v);
         if (p.size() != 7) {
           throw ConfigError("grammar.probabilities needs 7 entries (pred, not, and, or, F, G, U)");
         }
         c.grammar.probabilities = {p[0], p[1], p[2], p[3], p[4], p[5], p[6]};
       }},
      {"grammar.seed", [](RunConfig& c, V v) { c.grammar.seed = to_unsigned(v); }},
      {"selection.n_target", [](RunConfig& c, V v) { c.selection.n_target = to_size(v); }},
      {"selection.sim_threshold", [](RunConfig& c, V v) { c.selection.sim_threshold = to_real(v); }},
      {"selection.max_attempts", [](RunConfig& c, V v) { c.selection.max_attempts = to_size(v); }},
      {"selection.absolute_cosine",
       [](RunConfig& c, V v) { c.selection.absolute_cosine = to_bool(v); }},
      {"model.T_attn", [](RunConfig& c, V v) { c.model.t_attn = to_real(v); }},
      {"model.epsilon_G", [](RunConfig& c, V v) { c.model.epsilon_g = to_real(v); }},
      {"model.epochs", [](RunConfig& c, V v) { c.model.epochs = to_size(v); }},
      {"model.lr", [](RunConfig& c, V v) { c.model.learning_rate = to_real(v); }},
      {"model.l2", [](RunConfig& c, V v) { c.model.l2 = to_real(v); }},
      {"model.seed", [](RunConfig& c, V v) { c.model.seed = to_unsigned(v); }},
      {"model.step_growth", [](RunConfig& c, V v) { c.model.step_growth = to_real(v); }},
      {"explain.mode",
       [](RunConfig& c, V v) {
         const std::string mode = to_text(v);
         if (mode == "top_gamma") {
           c.explain.mode.kind = SelectionMode::Kind::kTopGamma;
         } else if (mode == "cumulative") {
           c.explain.mode.kind = SelectionMode::Kind::kCumulative;
         } else {
           throw ConfigError("explain.mode must be top_gamma or cumulative");
         }
       }},
      {"explain.gamma", [](RunConfig& c, V v) { c.explain.mode.gamma = to_size(v); }},
      {"explain.theta", [](RunConfig& c, V v) { c.explain.mode.theta = to_real(v); }},
      {"explain.coverage_target", [](RunConfig& c, V v) { c.explain.coverage_target = to_real(v); }},
      {"explain.leakage_max", [](RunConfig& c, V v) { c.explain.leakage_max = to_real(v); }},
      {"kernel.epsilon",
       [](RunConfig& c, V v) {
         if (v.is_string()) {
           if (to_text(v) != "median") throw ConfigError("expected a number or \"median\"");
           c.kernel.epsilon.reset();
         } else {
           c.kernel.epsilon = to_real(v);
         }
       }},
      {"kernel.squash", [](RunConfig& c, V v) { c.kernel.squash = to_bool(v); }},
      {"io.train", [](RunConfig& c, V v) { c.io.train = to_text(v); }},
      {"io.test", [](RunConfig& c, V v) { c.io.test = to_text(v); }},
      {"io.bank", [](RunConfig& c, V v) { c.io.bank = to_text(v); }},
      {"io.model", [](RunConfig& c, V v) { c.io.model = to_text(v); }},
      {"io.report", [](RunConfig& c, V v) { c.io.report = to_text(v); }},
  };
  return table;
}

void set(RunConfig& cfg, std::string_view key, const toml::node& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  try {
    it->second(cfg, value);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

std::string where(const toml::node& node) {
  return "config line " + std::to_string(node.source().begin.line) + ": ";
}

toml::table parse_toml(std::string_view text) {
  try {
    return toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "config line " << e.source().begin.line << ", column " << e.source().begin.column
        << ": " << e.description();
    throw ConfigError(msg.str());
  }
}

}  // namespace

RunConfig parse_run_config(std::string_view text) {
  RunConfig cfg;
  const toml::table doc = parse_toml(text);
  for (const auto& [name, section] : doc) {
    const auto* entries = section.as_table();
    if (!entries) {
      throw ConfigError(where(section) + "key '" + std::string(name.str()) +
                        "' outside of a section");
    }
    const std::string prefix = std::string(name.str()) + ".";
    const auto next = setters().lower_bound(prefix);
    if (next == setters().end() || !next->first.starts_with(prefix)) {
      throw ConfigError(where(section) + "unknown section [" + std::string(name.str()) + "]");
    }
    for (const auto& [key, value] : *entries) {
      try {
        set(cfg, std::string(name.str()) + "." + std::string(key.str()), value);
      } catch (const ConfigError& e) {
        throw ConfigError(where(value) + e.what());
      }
    }
  }
  return cfg;
}

void apply_override(RunConfig& cfg, std::string_view dotted_key, std::string_view value) {
  // A typed value that the key rejects is retried as a string, so that
  // `--io.bank=2024` still names a file.
  const toml::value<std::string> plain{std::string(value)};
  toml::table holder;
  try {
    holder = toml::parse("v = " + std::string(value));
  } catch (const toml::parse_error&) {
    set(cfg, dotted_key, plain);
    return;
  }
  try {
    set(cfg, dotted_key, *holder.get("v"));
  } catch (const ConfigError&) {
    if (holder.get("v")->is_string()) throw;
    set(cfg, dotted_key, plain);
  }
}

}  // namespace stlcc::cli
