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

#include "stlcc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "json.hpp"
#include "stlcc/error.hpp"
#include "stlcc/syntax.hpp"

namespace stlcc {
namespace {

constexpr double kStdFloor = 1e-8;

std::optional<double> parse_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return v;
}

std::vector<std::string> sorted_classes(std::vector<std::string> tokens) {
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  const bool numeric = std::all_of(tokens.begin(), tokens.end(), [](const auto& t) {
    return parse_number(t).has_value();
  });
  if (numeric) {
    std::stable_sort(tokens.begin(), tokens.end(), [](const auto& a, const auto& b) {
      return *parse_number(a) < *parse_number(b);
    });
  }
  return tokens;
}

// Assigns dense labels to raw tokens.
void assign_labels(Dataset& ds, const std::vector<std::string>& tokens,
                   const std::vector<std::string>* known_classes) {
  ds.class_names = known_classes ? *known_classes : sorted_classes(tokens);
  std::map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < ds.class_names.size(); ++k) index[ds.class_names[k]] = k;
  ds.labels.clear();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto it = index.find(tokens[i]);
    if (it == index.end()) {
      throw DataError("unknown label '" + tokens[i] + "' in sample " +
                      std::to_string(i + 1));
    }
    ds.labels.push_back(it->second);
  }
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  auto is_sep = [](char c) {
    return c == '\t' || c == ',' || c == ' ' || c == '\r';
  };
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_sep(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

}  // namespace

void Dataset::validate() const {
  if (samples.size() != labels.size()) {
    throw DataError("dataset has " + std::to_string(samples.size()) +
                    " samples but " + std::to_string(labels.size()) + " labels");
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].dims() != dims() || samples[i].length() != length()) {
      throw DataError("sample " + std::to_string(i + 1) +
                      " differs in shape from the first sample");
    }
    if (labels[i] >= class_names.size()) {
      throw DataError("label index out of range in sample " + std::to_string(i + 1));
    }
  }
}

Dataset load_ucr_tsv(const std::filesystem::path& path,
                     const std::vector<std::string>* known_classes) {
  const std::string text = read_text(path);
  Dataset ds;
  std::vector<std::string> tokens;
  std::istringstream lines(text);
  std::string line;
  std::size_t row = 0;
  std::size_t length = 0;
  while (std::getline(lines, line)) {
    ++row;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() < 2) {
      throw DataError(path.string() + ": row " + std::to_string(row) +
                      " has a label but no values");
    }
    if (length == 0) length = fields.size() - 1;
    if (fields.size() - 1 != length) {
      throw DataError(path.string() + ": row " + std::to_string(row) + " has " +
                      std::to_string(fields.size() - 1) + " values, expected " +
                      std::to_string(length));
    }
    std::vector<double> values;
    values.reserve(length);
    for (std::size_t f = 1; f < fields.size(); ++f) {
      const auto v = parse_number(fields[f]);
      if (!v || !std::isfinite(*v)) {
        throw DataError(path.string() + ": row " + std::to_string(row) +
                        ", field " + std::to_string(f + 1) + ": '" +
                        std::string(fields[f]) + "' is not a finite number");
      }
      values.push_back(*v);
    }
    tokens.emplace_back(fields.front());
    ds.samples.emplace_back(1, length, std::move(values));
  }
  if (ds.samples.empty()) throw DataError(path.string() + ": no samples");
  assign_labels(ds, tokens, known_classes);
  return ds;
}

void write_ucr_tsv(const Dataset& dataset, const std::filesystem::path& path) {
  dataset.validate();
  if (dataset.dims() > 1) {
    throw DataError("UCR text format holds univariate data only");
  }
  std::string out;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    out += dataset.class_names[dataset.labels[i]];
    for (double v : dataset.samples[i].values()) {
      out += '\t';
      out += format_real(v);
    }
    out += '\n';
  }
  write_text(path, out);
}

Dataset load_multivariate_json(const std::filesystem::path& path,
                               const std::vector<std::string>* known_classes) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("labels") || !doc.contains("samples") ||
      !doc["labels"].is_array() || !doc["samples"].is_array()) {
    throw DataError(path.string() + ": expected an object with 'labels' and 'samples' arrays");
  }
  if (doc.contains("version") && doc["version"] != 1) {
    throw DataError(path.string() + ": unsupported version");
  }
  const auto& labels = doc["labels"];
  const auto& samples = doc["samples"];
  if (labels.empty()) throw DataError(path.string() + ": empty labels");
  if (labels.size() != samples.size()) {
    throw DataError(path.string() + ": labels and samples differ in count");
  }
  Dataset ds;
  std::vector<std::string> tokens;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const auto& lab = labels[s];
    if (lab.is_string()) {
      tokens.push_back(lab.get<std::string>());
    } else if (lab.is_number()) {
      tokens.push_back(lab.dump());
    } else {
      throw DataError(path.string() + ": label " + std::to_string(s) + " must be a number or string");
    }
    const auto& rows = samples[s];
    if (!rows.is_array() || rows.empty()) {
      throw DataError(path.string() + ": sample " + std::to_string(s) + " must be a non-empty D x T array");
    }
    std::vector<std::vector<double>> values;
    for (const auto& r : rows) {
      if (!r.is_array()) {
        throw DataError(path.string() + ": sample " + std::to_string(s) + " must be a D x T array");
      }
      std::vector<double> row;
      for (const auto& v : r) {
        if (!v.is_number()) {
          throw DataError(path.string() + ": non-numeric value in sample " + std::to_string(s));
        }
        row.push_back(v.get<double>());
      }
      values.push_back(std::move(row));
    }
    try {
      ds.samples.push_back(Trajectory::from_rows(values));
    } catch (const DataError& e) {
      throw DataError(path.string() + ": sample " + std::to_string(s) + ": " + e.what());
    }
    if (ds.samples.back().dims() != ds.samples.front().dims() ||
        ds.samples.back().length() != ds.samples.front().length()) {
      throw DataError(path.string() + ": sample " + std::to_string(s) +
                      " differs in D or T from the first sample");
    }
  }
  assign_labels(ds, tokens, known_classes);
  return ds;
}

void write_multivariate_json(const Dataset& dataset,
                             const std::filesystem::path& path) {
  using nlohmann::json;
  dataset.validate();
  json labels = json::array();
  json samples = json::array();
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    labels.push_back(dataset.class_names[dataset.labels[i]]);
    json rows = json::array();
    for (std::size_t d = 0; d < dataset.dims(); ++d) {
      const auto r = dataset.samples[i].row(d);
      rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    samples.push_back(std::move(rows));
  }
  json doc = {{"version", 1}, {"labels", labels}, {"samples", samples}};
  write_text(path, doc.dump() + "\n");
}

Dataset load_dataset(const std::filesystem::path& path,
                     const std::vector<std::string>* known_classes) {
  if (path.extension() == ".json") return load_multivariate_json(path, known_classes);
  return load_ucr_tsv(path, known_classes);
}

NormalizationRecord fit_normalization(const Dataset& dataset) {
  dataset.validate();
  if (dataset.samples.empty()) throw DataError("cannot standardize an empty dataset");
  const std::size_t D = dataset.dims();
  NormalizationRecord rec;
  rec.mean.assign(D, 0.0);
  rec.stddev.assign(D, 0.0);
  const double count = static_cast<double>(dataset.size() * dataset.length());
  for (std::size_t d = 0; d < D; ++d) {
    double sum = 0.0;
    for (const auto& s : dataset.samples) {
      for (double v : s.row(d)) sum += v;
    }
    const double mean = sum / count;
    double sq = 0.0;
    for (const auto& s : dataset.samples) {
      for (double v : s.row(d)) sq += (v - mean) * (v - mean);
    }
    rec.mean[d] = mean;
    rec.stddev[d] = std::sqrt(sq / count);
  }
  return rec;
}

Dataset standardize(const Dataset& dataset, Standardization mode,
                    const NormalizationRecord* record) {
  NormalizationRecord rec;
  if (mode == Standardization::kFit) {
    rec = fit_normalization(dataset);
  } else {
    if (record == nullptr) {
      throw ConfigError("standardize: apply requested without a normalization record");
    }
    rec = *record;
  }
  dataset.validate();
  if (!dataset.samples.empty() && rec.mean.size() != dataset.dims()) {
    throw DataError("normalization record has " + std::to_string(rec.mean.size()) +
                    " variables, dataset has " + std::to_string(dataset.dims()));
  }
  Dataset out = dataset;
  for (auto& s : out.samples) {
    for (std::size_t d = 0; d < s.dims(); ++d) {
      const double scale = std::max(rec.stddev[d], kStdFloor);
      for (double& v : s.row(d)) v = (v - rec.mean[d]) / scale;
    }
  }
  out.normalization = std::move(rec);
  return out;
}

}  // namespace stlcc
