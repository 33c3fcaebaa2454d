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

#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "run_config.hpp"
#include "stlcc/error.hpp"
#include "stlcc/io.hpp"
#include "stlcc/kernel.hpp"
#include "stlcc/monitor.hpp"
#include "stlcc/syntax.hpp"

namespace stlcc::cli {
namespace {

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

bool is_override(const std::string& arg) {
  if (!arg.starts_with("--")) return false;
  const auto eq = arg.find('=');
  const auto dot = arg.find('.');
  return dot != std::string::npos && (eq == std::string::npos || dot < eq);
}

std::string pick(const std::string& flag, const std::string& fallback, const char* what) {
  if (!flag.empty()) return flag;
  if (!fallback.empty()) return fallback;
  throw ConfigError(std::string("no ") + what + " given (flag or [io] entry)");
}

// Loads a split and brings it onto the model's scale and class mapping.
Dataset load_for_model(const std::string& path, const ConceptModel& model) {
  Dataset ds = load_dataset(path, &model.class_names);
  if (model.normalization) {
    ds = standardize(ds, Standardization::kApply, &*model.normalization);
  }
  return ds;
}

void emit(const std::string& out_path, const std::string& text) {
  if (!out_path.empty()) write_file(out_path, text);
}

int cmd_gen_concepts(const RunConfig& cfg, const std::string& out_flag, std::ostream& out,
                     std::ostream& err) {
  const std::string path = pick(out_flag, cfg.io.bank, "output bank path");
  const ConceptBank bank = select_concepts(cfg.grammar, cfg.selection, cfg.measure);
  save_bank(path, bank);
  out << "concepts " << bank.size() << "/" << cfg.selection.n_target << "  attempts "
      << bank.attempts << "  max|cos| " << fixed(max_pairwise_similarity(bank))
      << " (threshold " << format_real(cfg.selection.sim_threshold) << ")\n";
  if (bank.partial) {
    err << "warning: only " << bank.size() << " of " << cfg.selection.n_target
        << " concepts found within " << bank.attempts << " attempts\n";
    return kExitPartial;
  }
  return kExitOk;
}

int cmd_train(const RunConfig& cfg, const std::string& data_flag, const std::string& bank_flag,
              const std::string& out_flag, std::ostream& out) {
  const std::string data_path = pick(data_flag, cfg.io.train, "training data");
  const std::string bank_path = pick(bank_flag, cfg.io.bank, "bank");
  const std::string out_path = pick(out_flag, cfg.io.model, "output model path");
  ConceptBank bank = load_bank(bank_path);
  const Dataset train_set =
      standardize(load_dataset(data_path), Standardization::kFit);
  if (bank.base_length != train_set.length()) bank = rescale_bank(bank, train_set.length());
  const ConceptModel model = train(train_set, bank, cfg.model);
  save_model(out_path, model);
  const auto correct = static_cast<std::size_t>(
      std::llround(model.summary.final_accuracy * static_cast<double>(train_set.size())));
  out << "train loss " << fixed(model.summary.final_loss, 6) << "  accuracy "
      << fixed(model.summary.final_accuracy, 2) << " (" << correct << "/" << train_set.size()
      << ")  epochs " << model.summary.epochs_run << "  concepts " << bank.size()
      << "  length " << train_set.length() << "\n";
  return kExitOk;
}

int cmd_evaluate(const RunConfig& cfg, const std::string& model_flag,
                 const std::string& data_flag, const std::string& out_flag, std::ostream& out) {
  const ConceptModel model = load_model(pick(model_flag, cfg.io.model, "model"));
  const Dataset ds = load_for_model(pick(data_flag, cfg.io.test, "evaluation data"), model);
  const std::size_t K = model.num_classes();
  std::vector<std::vector<std::size_t>> confusion(K, std::vector<std::size_t>(K, 0));
  std::size_t correct = 0;
  for (std::size_t s = 0; s < ds.size(); ++s) {
    const std::size_t p = forward(ds.samples[s], model).predicted;
    ++confusion[ds.labels[s]][p];
    correct += p == ds.labels[s];
  }
  const double accuracy = static_cast<double>(correct) / static_cast<double>(ds.size());
  nlohmann::ordered_json report{{"samples", ds.size()},
                                {"accuracy", accuracy},
                                {"class_names", model.class_names},
                                {"confusion", confusion}};
  out << "accuracy " << fixed(accuracy) << " (" << correct << "/" << ds.size() << ")\n";
  out << "class\tprecision\trecall\tsupport\n";
  nlohmann::ordered_json per_class = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < K; ++k) {
    std::size_t predicted = 0, support = 0;
    for (std::size_t j = 0; j < K; ++j) {
      predicted += confusion[j][k];
      support += confusion[k][j];
    }
    const double precision =
        predicted ? static_cast<double>(confusion[k][k]) / static_cast<double>(predicted) : 0.0;
    const double recall =
        support ? static_cast<double>(confusion[k][k]) / static_cast<double>(support) : 0.0;
    out << model.class_names[k] << "\t" << fixed(precision) << "\t" << fixed(recall) << "\t"
        << support << "\n";
    per_class.push_back({{"class", model.class_names[k]},
                         {"precision", precision},
                         {"recall", recall},
                         {"support", support}});
  }
  report["per_class"] = std::move(per_class);
  out << "confusion (rows true, columns predicted)\n";
  for (std::size_t k = 0; k < K; ++k) {
    out << model.class_names[k];
    for (std::size_t j = 0; j < K; ++j) out << "\t" << confusion[k][j];
    out << "\n";
  }
  emit(out_flag, report.dump(2) + "\n");
  return kExitOk;
}

std::size_t resolve_class(const std::string& token, const std::vector<std::string>& names) {
  const auto it = std::find(names.begin(), names.end(), token);
  if (it != names.end()) return static_cast<std::size_t>(it - names.begin());
  throw ConfigError("unknown class '" + token + "'");
}

void print_local(const LocalReport& r, const ConceptModel& model, std::ostream& out) {
  const LocalExplanation& e = r.explanation;
  out << "sample " << r.sample_id;
  if (r.true_label) out << "  true " << model.class_names[*r.true_label];
  out << "  predicted " << model.class_names[e.predicted] << "\n";
  for (const auto& c : e.conjuncts) {
    out << "  concept " << c.concept_index << "  relevance " << format_real(c.relevance)
        << "  " << to_string(c.concept_formula) << "\n    => " << to_string(c.simplified)
        << "  (robustness " << format_real(c.robustness) << ")\n";
  }
  out << "  E_l = " << to_string(e.formula) << (e.vacuous ? "  [vacuous]" : "") << "\n";
  out << "  robustness(E_l) = " << format_real(e.robustness)
      << (e.robustness > 0.0 ? "  sound" : "  NOT SOUND") << "\n";
}

void print_global(const GlobalExplanation& g, const ConceptModel& model, double target,
                  std::ostream& out) {
  out << "class " << model.class_names[g.class_index] << "\n";
  if (g.no_candidates) {
    out << "  no discriminative concepts\n";
    return;
  }
  out << "  E_g = " << to_string(g.formula) << "\n";
  out << "  coverage " << fixed(g.coverage) << "  leakage " << fixed(g.leakage) << "  cost "
      << g.total_cost << "  disjuncts " << g.disjuncts.size() << "  candidates "
      << g.candidates_kept << "/" << g.candidates << "\n";
  if (!g.target_met) out << "  coverage target " << format_real(target) << " not met\n";
}

int cmd_explain(const RunConfig& cfg, const std::string& model_flag,
                const std::string& data_flag, const std::string& train_flag,
                const std::vector<std::size_t>& samples, const std::vector<std::string>& globals,
                bool all, const std::string& out_flag, std::ostream& out) {
  const ConceptModel model = load_model(pick(model_flag, cfg.io.model, "model"));
  const std::string data_path = pick(data_flag, cfg.io.test, "data");
  const Dataset ds = load_for_model(data_path, model);
  const std::string train_path = train_flag.empty() ? cfg.io.train : train_flag;
  const Dataset train_set = train_path.empty() ? ds : load_for_model(train_path, model);
  cfg.explain.mode.validate();

  std::vector<std::size_t> chosen = samples;
  std::vector<std::size_t> classes;
  if (all) {
    chosen.resize(ds.size());
    for (std::size_t s = 0; s < ds.size(); ++s) chosen[s] = s;
    for (std::size_t k = 0; k < model.num_classes(); ++k) classes.push_back(k);
  }
  for (const auto& g : globals) classes.push_back(resolve_class(g, model.class_names));
  if (chosen.empty() && classes.empty()) {
    throw ConfigError("explain needs --sample, --global or --all");
  }

  ExplanationReport report;
  report.class_names = model.class_names;
  bool flagged = false;
  for (std::size_t s : chosen) {
    if (s >= ds.size()) throw ConfigError("sample index " + std::to_string(s) + " out of range");
    LocalReport r{s, ds.labels[s],
                  local_explanation(ds.samples[s], model, cfg.explain.mode, train_set)};
    print_local(r, model, out);
    report.local.push_back(std::move(r));
  }
  GlobalConfig gcfg;
  gcfg.coverage_target = cfg.explain.coverage_target;
  gcfg.leakage_max = cfg.explain.leakage_max;
  gcfg.mode = cfg.explain.mode;
  for (std::size_t k : classes) {
    GlobalExplanation g = global_explanation(k, train_set, model, gcfg);
    print_global(g, model, gcfg.coverage_target, out);
    flagged = flagged || !g.target_met;
    report.global.push_back(std::move(g));
  }
  emit(out_flag.empty() ? cfg.io.report : out_flag, serialize_report(report));
  return flagged ? kExitPartial : kExitOk;
}

int cmd_monitor(const RunConfig& cfg, const std::string& formula_text,
                const std::string& data_flag, const std::string& out_flag, std::ostream& out,
                std::ostream& err) {
  const Formula phi = parse_formula(formula_text);
  const Dataset ds = load_dataset(pick(data_flag, cfg.io.test, "data"));
  if (!fits_horizon(phi, ds.length())) {
    err << "warning: horizon " << phi.horizon() << " exceeds the trace length " << ds.length()
        << "; windows are clipped\n";
  }
  std::ostringstream table;
  table << "sample\tlabel\trobustness\tverdict\n";
  for (std::size_t s = 0; s < ds.size(); ++s) {
    double r = robustness(phi, ds.samples[s]);
    if (r == 0.0) r = 0.0;
    table << s << "\t" << ds.class_names[ds.labels[s]] << "\t" << format_real(r) << "\t"
          << (r >= 0.0 ? "true" : "false") << "\n";
  }
  out << table.str();
  emit(out_flag, table.str());
  return kExitOk;
}

int cmd_kernel(const RunConfig& cfg, const std::vector<std::string>& texts,
               const std::string& data_flag, const std::string& out_flag, std::ostream& out) {
  std::vector<Formula> formulas;
  for (const auto& t : texts) formulas.push_back(parse_formula(t));
  KernelContext::Options opts;
  opts.epsilon = cfg.kernel.epsilon;
  opts.squash = cfg.kernel.squash;
  // The base sample must match the data's shape; the data is standardized
  // onto the measure's scale with its own statistics.
  Dataset ds;
  MeasureConfig measure = cfg.measure;
  if (!data_flag.empty()) {
    ds = standardize(load_dataset(data_flag), Standardization::kFit);
    measure.length = ds.length();
    measure.dims = ds.dims();
    measure.num_knots = std::min(measure.num_knots, measure.length);
  }
  const KernelContext ctx(sample_measure(measure), opts);
  std::ostringstream table;
  if (!data_flag.empty()) {
    table << "sample";
    for (std::size_t j = 0; j < formulas.size(); ++j) table << "\tk(tau,phi" << j << ")";
    table << "\n";
    for (std::size_t s = 0; s < ds.size(); ++s) {
      table << s;
      for (const auto& f : formulas) table << "\t" << format_real(cross_kernel(ds.samples[s], f, ctx));
      table << "\n";
    }
  } else {
    const auto gram = gram_matrix(formulas, ctx);
    const std::size_t n = formulas.size();
    for (std::size_t j = 0; j < n; ++j) table << "phi" << j << "\t" << to_string(formulas[j]) << "\n";
    table << "k";
    for (std::size_t j = 0; j < n; ++j) table << "\tphi" << j;
    table << "\n";
    for (std::size_t i = 0; i < n; ++i) {
      table << "phi" << i;
      for (std::size_t j = 0; j < n; ++j) table << "\t" << format_real(gram[i * n + j]);
      table << "\n";
    }
  }
  table << "epsilon\t" << format_real(ctx.epsilon()) << "\n";
  out << table.str();
  emit(out_flag, table.str());
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<std::pair<std::string, std::string>> overrides;
  std::vector<std::string> rest;
  for (const auto& a : args) {
    if (is_override(a)) {
      const auto eq = a.find('=');
      if (eq == std::string::npos) {
        err << "error: override " << a << " needs the form --section.key=value\n";
        return kExitError;
      }
      overrides.emplace_back(a.substr(2, eq - 2), a.substr(eq + 1));
    } else {
      rest.push_back(a);
    }
  }

  CLI::App app{"Concept-based STL time-series classification and explanation", "stlcc"};
  app.require_subcommand(1);
  std::string config_path, out_path;
  app.add_option("--config", config_path, "run configuration file");
  app.add_option("--out", out_path, "write the artifact or report to this path");
  app.fallthrough();

  std::string data, bank, model, train_path, formula;
  std::vector<std::string> formulas, globals;
  std::vector<std::size_t> samples;
  bool all = false;

  auto* gen = app.add_subcommand("gen-concepts", "sample and select a concept bank");
  auto* trn = app.add_subcommand("train", "fit the classifier on a training split");
  trn->add_option("--data", data, "training data (UCR TSV or JSON)");
  trn->add_option("--bank", bank, "concept bank file");
  auto* evl = app.add_subcommand("evaluate", "accuracy and confusion matrix");
  evl->add_option("--model", model, "model file");
  evl->add_option("--data", data, "data to evaluate");
  auto* exp = app.add_subcommand("explain", "local and global explanations");
  exp->add_option("--model", model, "model file");
  exp->add_option("--data", data, "samples to explain");
  exp->add_option("--train", train_path, "training split used for pruning and global sets");
  exp->add_option("--sample", samples, "sample index (repeatable)");
  exp->add_option("--global", globals, "class label for a global explanation (repeatable)");
  exp->add_flag("--all", all, "explain every sample and every class");
  auto* mon = app.add_subcommand("monitor", "robustness of one formula on every sample");
  mon->add_option("--formula", formula, "STL formula")->required();
  mon->add_option("--data", data, "data file");
  auto* ker = app.add_subcommand("kernel", "kernel values over the base measure");
  ker->add_option("--formula", formulas, "STL formula (repeatable)")->required();
  ker->add_option("--data", data, "trajectories for cross-kernel values");

  try {
    std::vector<std::string> reversed(rest.rbegin(), rest.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitError;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg = parse_run_config(read_file(config_path));
    for (const auto& [key, value] : overrides) apply_override(cfg, key, value);

    if (gen->parsed()) return cmd_gen_concepts(cfg, out_path, out, err);
    if (trn->parsed()) return cmd_train(cfg, data, bank, out_path, out);
    if (evl->parsed()) return cmd_evaluate(cfg, model, data, out_path, out);
    if (exp->parsed()) {
      return cmd_explain(cfg, model, data, train_path, samples, globals, all, out_path, out);
    }
    if (mon->parsed()) return cmd_monitor(cfg, formula, data, out_path, out, err);
    if (ker->parsed()) return cmd_kernel(cfg, formulas, data, out_path, out);
  } catch (const ParseError& e) {
    err << "error: formula syntax at line " << e.line() << ", column " << e.column() << ": "
        << e.message() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace stlcc::cli
