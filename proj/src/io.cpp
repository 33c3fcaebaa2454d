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

#include "stlcc/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "stlcc/error.hpp"
#include "stlcc/syntax.hpp"

namespace stlcc {

using Json = nlohmann::ordered_json;

namespace {

Json to_json(const Matrix& m) {
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

Matrix matrix_from(const Json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  auto data = j.at("data").get<std::vector<double>>();
  if (data.size() != m.data().size()) throw DataError("matrix data has the wrong size");
  m.data() = std::move(data);
  return m;
}

Json to_json(const MeasureConfig& m) {
  return Json{{"M", m.num_trajectories}, {"T", m.length},         {"D", m.dims},
              {"num_knots", m.num_knots}, {"value_std", m.value_std}, {"seed", m.seed}};
}

MeasureConfig measure_from(const Json& j) {
  MeasureConfig m;
  m.num_trajectories = j.at("M").get<std::size_t>();
  m.length = j.at("T").get<std::size_t>();
  m.dims = j.at("D").get<std::size_t>();
  m.num_knots = j.at("num_knots").get<std::size_t>();
  m.value_std = j.at("value_std").get<double>();
  m.seed = j.at("seed").get<std::uint64_t>();
  return m;
}

Json to_json(const GrammarConfig& g) {
  const auto& p = g.probabilities;
  return Json{{"max_depth", g.max_depth},
              {"max_vars", g.max_vars_per_formula},
              {"probabilities",
               {{"predicate", p.predicate},
                {"not", p.negation},
                {"and", p.conjunction},
                {"or", p.disjunction},
                {"eventually", p.eventually},
                {"globally", p.globally},
                {"until", p.until}}},
              {"base_length", g.base_length},
              {"dims", g.dims},
              {"seed", g.seed}};
}

GrammarConfig grammar_from(const Json& j) {
  GrammarConfig g;
  g.max_depth = j.at("max_depth").get<std::size_t>();
  g.max_vars_per_formula = j.at("max_vars").get<std::size_t>();
  const Json& p = j.at("probabilities");
  g.probabilities.predicate = p.at("predicate").get<double>();
  g.probabilities.negation = p.at("not").get<double>();
  g.probabilities.conjunction = p.at("and").get<double>();
  g.probabilities.disjunction = p.at("or").get<double>();
  g.probabilities.eventually = p.at("eventually").get<double>();
  g.probabilities.globally = p.at("globally").get<double>();
  g.probabilities.until = p.at("until").get<double>();
  g.base_length = j.at("base_length").get<std::size_t>();
  g.dims = j.at("dims").get<std::size_t>();
  g.seed = j.at("seed").get<std::uint64_t>();
  return g;
}

Json to_json(const SelectionConfig& s) {
  return Json{{"n_target", s.n_target},
              {"sim_threshold", s.sim_threshold},
              {"max_attempts", s.max_attempts},
              {"absolute_cosine", s.absolute_cosine}};
}

SelectionConfig selection_from(const Json& j) {
  SelectionConfig s;
  s.n_target = j.at("n_target").get<std::size_t>();
  s.sim_threshold = j.at("sim_threshold").get<double>();
  s.max_attempts = j.at("max_attempts").get<std::size_t>();
  s.absolute_cosine = j.at("absolute_cosine").get<bool>();
  return s;
}

Json bank_json(const ConceptBank& bank, bool with_signatures) {
  Json concepts = Json::array();
  for (const auto& phi : bank.concepts) concepts.push_back(to_string(phi));
  Json out{{"version", kFormatVersion},
           {"T0", bank.base_length},
           {"measure", to_json(bank.measure)},
           {"grammar", to_json(bank.grammar)},
           {"selection", to_json(bank.selection)},
           {"attempts", bank.attempts},
           {"partial", bank.partial},
           {"concepts", std::move(concepts)},
           {"costs", bank.costs}};
  if (with_signatures) out["signatures"] = bank.signatures;
  return out;
}

void check_version(const Json& j, const char* what) {
  if (j.at("version").get<int>() != kFormatVersion) {
    throw DataError(std::string(what) + ": unsupported format version");
  }
}

ConceptBank bank_from(const Json& j) {
  check_version(j, "bank");
  ConceptBank bank;
  bank.base_length = j.at("T0").get<std::size_t>();
  bank.measure = measure_from(j.at("measure"));
  bank.grammar = grammar_from(j.at("grammar"));
  bank.selection = selection_from(j.at("selection"));
  bank.attempts = j.at("attempts").get<std::size_t>();
  bank.partial = j.at("partial").get<bool>();
  for (const auto& s : j.at("concepts")) bank.concepts.push_back(parse_formula(s.get<std::string>()));
  bank.costs = j.at("costs").get<std::vector<std::size_t>>();
  if (bank.costs.size() != bank.concepts.size()) {
    throw DataError("bank: costs and concepts differ in length");
  }
  for (std::size_t i = 0; i < bank.size(); ++i) {
    if (bank.costs[i] != bank.concepts[i].size()) {
      throw DataError("bank: cost of concept " + std::to_string(i) + " does not match its size");
    }
  }
  if (j.contains("signatures")) {
    bank.signatures = j.at("signatures").get<std::vector<std::vector<double>>>();
    if (bank.signatures.size() != bank.concepts.size()) {
      throw DataError("bank: signatures and concepts differ in length");
    }
  } else {
    compute_signatures(bank);
  }
  return bank;
}

Json stats_json(const ClassStats& s) {
  return Json{{"num_classes", s.num_classes},
              {"num_concepts", s.num_concepts},
              {"epsilon_G", s.epsilon_g},
              {"counts", s.counts},
              {"mean", to_json(s.mean)},
              {"std", to_json(s.stddev)},
              {"complement_mean", to_json(s.complement_mean)},
              {"complement_std", to_json(s.complement_stddev)}};
}

ClassStats stats_from(const Json& j) {
  ClassStats s;
  s.num_classes = j.at("num_classes").get<std::size_t>();
  s.num_concepts = j.at("num_concepts").get<std::size_t>();
  s.epsilon_g = j.at("epsilon_G").get<double>();
  s.counts = j.at("counts").get<std::vector<std::size_t>>();
  s.mean = matrix_from(j.at("mean"));
  s.stddev = matrix_from(j.at("std"));
  s.complement_mean = matrix_from(j.at("complement_mean"));
  s.complement_stddev = matrix_from(j.at("complement_std"));
  return s;
}

Json local_json(const LocalReport& r, const std::vector<std::string>& names) {
  const LocalExplanation& e = r.explanation;
  Json conjuncts = Json::array();
  for (const auto& c : e.conjuncts) {
    conjuncts.push_back({{"concept", c.concept_index},
                         {"concept_formula", to_string(c.concept_formula)},
                         {"formula", to_string(c.simplified)},
                         {"relevance", c.relevance},
                         {"robustness", c.robustness}});
  }
  Json out{{"sample_id", r.sample_id}};
  if (r.true_label) out["true_label"] = names.at(*r.true_label);
  out["predicted"] = names.at(e.predicted);
  out["predicted_index"] = e.predicted;
  out["logits"] = e.logits;
  out["mode"] = e.mode.kind == SelectionMode::Kind::kTopGamma
                    ? Json{{"kind", "top_gamma"}, {"gamma", e.mode.gamma}}
                    : Json{{"kind", "cumulative"}, {"theta", e.mode.theta}};
  out["conjuncts"] = std::move(conjuncts);
  out["explanation"] = to_string(e.formula);
  out["robustness"] = e.robustness;
  out["residual"] = e.residual;
  out["vacuous"] = e.vacuous;
  return out;
}

Json global_json(const GlobalExplanation& g, const std::vector<std::string>& names) {
  Json disjuncts = Json::array();
  for (std::size_t j = 0; j < g.disjuncts.size(); ++j) {
    disjuncts.push_back({{"formula", to_string(g.disjuncts[j])}, {"cost", g.disjunct_costs[j]}});
  }
  return Json{{"class", names.at(g.class_index)},
              {"class_index", g.class_index},
              {"disjuncts", std::move(disjuncts)},
              {"explanation", to_string(g.formula)},
              {"coverage", g.coverage},
              {"universe_coverage", g.universe_coverage},
              {"leakage", g.leakage},
              {"cost", g.total_cost},
              {"universe_size", g.universe_size},
              {"candidates", g.candidates},
              {"candidates_kept", g.candidates_kept},
              {"target_met", g.target_met},
              {"no_candidates", g.no_candidates}};
}

template <typename Fn>
auto guarded(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw DataError(std::string(what) + ": " + e.what());
  } catch (const ParseError& e) {
    throw DataError(std::string(what) + ": bad formula: " + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string serialize_bank(const ConceptBank& bank, bool with_signatures) {
  return dump(bank_json(bank, with_signatures));
}

ConceptBank parse_bank(std::string_view text) {
  return guarded("bank", [&] { return bank_from(Json::parse(text)); });
}

std::string serialize_model(const ConceptModel& model) {
  const TrainingConfig& t = model.training;
  Json out{{"version", kFormatVersion},
           {"flatten_order", "i*K+k"},
           {"class_names", model.class_names},
           {"T_attn", model.t_attn},
           {"epsilon_G", model.stats.epsilon_g},
           {"weights", to_json(model.weights)},
           {"bias", model.bias},
           {"stats", stats_json(model.stats)},
           {"training",
            {{"seed", t.seed},
             {"epochs", t.epochs},
             {"lr", t.learning_rate},
             {"l2", t.l2},
             {"step_growth", t.step_growth},
             {"init_scale", t.init_scale},
             {"epochs_run", model.summary.epochs_run},
             {"final_loss", model.summary.final_loss},
             {"final_accuracy", model.summary.final_accuracy},
             {"final_lr", model.summary.final_learning_rate}}}};
  if (model.normalization) {
    out["normalization"] = {{"mean", model.normalization->mean},
                            {"std", model.normalization->stddev}};
  } else {
    out["normalization"] = nullptr;
  }
  out["bank"] = bank_json(model.bank, true);
  return dump(out);
}

ConceptModel parse_model(std::string_view text) {
  return guarded("model", [&] {
    const Json j = Json::parse(text);
    check_version(j, "model");
    if (j.at("flatten_order").get<std::string>() != "i*K+k") {
      throw DataError("model: unknown flatten order");
    }
    ConceptModel m;
    m.class_names = j.at("class_names").get<std::vector<std::string>>();
    m.t_attn = j.at("T_attn").get<double>();
    m.weights = matrix_from(j.at("weights"));
    m.bias = j.at("bias").get<std::vector<double>>();
    m.stats = stats_from(j.at("stats"));
    const Json& t = j.at("training");
    m.training.t_attn = m.t_attn;
    m.training.epsilon_g = j.at("epsilon_G").get<double>();
    m.training.seed = t.at("seed").get<std::uint64_t>();
    m.training.epochs = t.at("epochs").get<std::size_t>();
    m.training.learning_rate = t.at("lr").get<double>();
    m.training.l2 = t.at("l2").get<double>();
    m.training.step_growth = t.at("step_growth").get<double>();
    m.training.init_scale = t.at("init_scale").get<double>();
    m.summary.epochs_run = t.at("epochs_run").get<std::size_t>();
    m.summary.final_loss = t.at("final_loss").get<double>();
    m.summary.final_accuracy = t.at("final_accuracy").get<double>();
    m.summary.final_learning_rate = t.at("final_lr").get<double>();
    if (!j.at("normalization").is_null()) {
      m.normalization = NormalizationRecord{
          j["normalization"].at("mean").get<std::vector<double>>(),
          j["normalization"].at("std").get<std::vector<double>>()};
    }
    m.bank = bank_from(j.at("bank"));
    const std::size_t K = m.bias.size(), n = m.bank.size();
    if (K < 2 || m.class_names.size() != K || m.weights.rows() != K ||
        m.weights.cols() != n * K || m.stats.num_classes != K || m.stats.num_concepts != n) {
      throw DataError("model: inconsistent dimensions");
    }
    return m;
  });
}

std::string serialize_report(const ExplanationReport& report) {
  Json local = Json::array(), global = Json::array();
  for (const auto& r : report.local) local.push_back(local_json(r, report.class_names));
  for (const auto& g : report.global) global.push_back(global_json(g, report.class_names));
  return dump(Json{{"version", kFormatVersion},
                   {"class_names", report.class_names},
                   {"local", std::move(local)},
                   {"global", std::move(global)}});
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("failed writing " + path.string());
}

ConceptBank load_bank(const std::filesystem::path& path) { return parse_bank(read_file(path)); }

void save_bank(const std::filesystem::path& path, const ConceptBank& bank) {
  write_file(path, serialize_bank(bank));
}

ConceptModel load_model(const std::filesystem::path& path) {
  return parse_model(read_file(path));
}

void save_model(const std::filesystem::path& path, const ConceptModel& model) {
  write_file(path, serialize_model(model));
}

}  // namespace stlcc
