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

#include <filesystem>
#include <fstream>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "doctest.h"
#include "json.hpp"
#include "run_config.hpp"
#include "stlcc/dataset.hpp"
#include "stlcc/error.hpp"
#include "stlcc/io.hpp"
#include "stlcc/monitor.hpp"
#include "stlcc/syntax.hpp"
#include "support/spike.hpp"

using namespace stlcc;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Workspace {
 public:
  Workspace() {
    std::random_device rd;
    root_ = fs::temp_directory_path() / ("stlcc_cli_" + std::to_string(rd()));
    fs::create_directories(root_);
    write_ucr_tsv(testing::spike_dataset(60, 30, 1), file("train.tsv"));
    write_ucr_tsv(testing::spike_dataset(60, 30, 2), file("test.tsv"));
    std::ofstream(file("run.toml")) << "# small run\n"
                                       "[measure]\nM = 100\nT = 30\n\n"
                                       "[selection]\nn_target = 25  # keep it quick\n"
                                       "[model]\nepochs = 300\n";
  }
  ~Workspace() { fs::remove_all(root_); }
  std::string file(const std::string& name) const { return (root_ / name).string(); }

 private:
  fs::path root_;
};

}  // namespace

TEST_SUITE("run config") {
  TEST_CASE("defaults, file values and overrides") {
    cli::RunConfig cfg = cli::parse_run_config(
        "[measure]\nM = 300\nseed = 7\n[grammar]\nprobabilities = [0.4, 0.0, 0.2, 0.1, 0.1, "
        "0.1, 0.1]\n[explain]\nmode = \"cumulative\"\ntheta = 0.7\n[io]\nbank = \"b.json\"\n"
        "[kernel]\nepsilon = 2.5\nsquash = false\n");
    CHECK(cfg.measure.num_trajectories == 300);
    CHECK(cfg.measure.seed == 7);
    CHECK(cfg.measure.length == 50);
    CHECK(cfg.grammar.probabilities.predicate == 0.4);
    CHECK(cfg.explain.mode.kind == SelectionMode::Kind::kCumulative);
    CHECK(cfg.explain.mode.theta == 0.7);
    CHECK(cfg.io.bank == "b.json");
    CHECK(cfg.kernel.epsilon == 2.5);
    CHECK_FALSE(cfg.kernel.squash);
    cli::apply_override(cfg, "measure.M", "500");
    cli::apply_override(cfg, "io.bank", "other.json");
    cli::apply_override(cfg, "kernel.epsilon", "median");
    CHECK(cfg.measure.num_trajectories == 500);
    CHECK(cfg.io.bank == "other.json");
    CHECK_FALSE(cfg.kernel.epsilon.has_value());
    cli::apply_override(cfg, "io.bank", "2024");
    CHECK(cfg.io.bank == "2024");
    cli::apply_override(cfg, "explain.mode", "\"top_gamma\"");
    CHECK(cfg.explain.mode.kind == SelectionMode::Kind::kTopGamma);
    CHECK_THROWS_AS(cli::apply_override(cfg, "measure.M", "many"), ConfigError);
    CHECK_THROWS_AS(cli::apply_override(cfg, "measure.M", "1.5"), ConfigError);
  }

  TEST_CASE("the shipped default config matches the built-in defaults") {
    const cli::RunConfig cfg = cli::parse_run_config(read_file(STLCC_CONFIG_DIR "/default.toml"));
    const cli::RunConfig def;
    CHECK(cfg.measure == def.measure);
    CHECK(cfg.grammar.probabilities == def.grammar.probabilities);
    CHECK(cfg.grammar.max_depth == def.grammar.max_depth);
    CHECK(cfg.grammar.max_vars_per_formula == def.grammar.max_vars_per_formula);
    CHECK(cfg.grammar.seed == def.grammar.seed);
    CHECK(cfg.selection.n_target == def.selection.n_target);
    CHECK(cfg.selection.sim_threshold == def.selection.sim_threshold);
    CHECK(cfg.selection.attempt_budget() == def.selection.attempt_budget());
    CHECK(cfg.model == def.model);
    CHECK(cfg.explain.mode.gamma == def.explain.mode.gamma);
    CHECK(cfg.explain.mode.theta == def.explain.mode.theta);
    CHECK(cfg.explain.coverage_target == def.explain.coverage_target);
    CHECK(cfg.explain.leakage_max == def.explain.leakage_max);
    CHECK_FALSE(cfg.kernel.epsilon.has_value());
  }

  TEST_CASE("unknown keys, sections and bad values are rejected") {
    CHECK_THROWS_AS(cli::parse_run_config("[measure]\nMM = 3\n"), ConfigError);
    CHECK_THROWS_AS(cli::parse_run_config("[nope]\n"), ConfigError);
    CHECK_THROWS_AS(cli::parse_run_config("M = 3\n"), ConfigError);
    CHECK_THROWS_AS(cli::parse_run_config("[measure]\nM = -3\n"), ConfigError);
    CHECK_THROWS_AS(cli::parse_run_config("[measure]\nvalue_std = abc\n"), ConfigError);
    CHECK_THROWS_AS(cli::parse_run_config("[selection]\nabsolute_cosine = yes\n"), ConfigError);
    CHECK_THROWS_AS(cli::parse_run_config("[grammar]\nprobabilities = [0.5, 0.5]\n"), ConfigError);
    CHECK_THROWS_AS(cli::parse_run_config("[explain]\nmode = \"best\"\n"), ConfigError);
    CHECK_THROWS_AS(cli::parse_run_config("[measure]\nM = 3\nM = 4\n"), ConfigError);
    CHECK_THROWS_AS(cli::parse_run_config("[measure\n"), ConfigError);
    try {
      cli::parse_run_config("[model]\nlr = 0.1\n\nepochz = 4\n");
      FAIL("expected an error");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
    cli::RunConfig cfg;
    CHECK_THROWS_AS(cli::apply_override(cfg, "model.nothing", "1"), ConfigError);
  }
}

TEST_SUITE("cli") {
  TEST_CASE("full pipeline with deterministic artifacts") {
    Workspace ws;
    const std::string cfg = "--config=" + ws.file("run.toml");
    auto gen = run({"gen-concepts", cfg, "--out", ws.file("bank.json")});
    REQUIRE(gen.code == 0);
    CHECK(gen.out.find("concepts 25/25") != std::string::npos);
    auto gen2 = run({"gen-concepts", cfg, "--out", ws.file("bank2.json")});
    CHECK(read_file(ws.file("bank.json")) == read_file(ws.file("bank2.json")));

    auto trn = run({"train", cfg, "--data", ws.file("train.tsv"), "--bank", ws.file("bank.json"),
                    "--out", ws.file("model.json")});
    REQUIRE(trn.code == 0);
    std::smatch trained;
    REQUIRE(std::regex_search(trn.out, trained, std::regex(R"(accuracy (\S+) \((\d+)/60\))")));
    CHECK(std::stod(trained[1]) >= 0.9);
    run({"train", cfg, "--data", ws.file("train.tsv"), "--bank", ws.file("bank.json"), "--out",
         ws.file("model2.json")});
    CHECK(read_file(ws.file("model.json")) == read_file(ws.file("model2.json")));

    auto ev = run({"evaluate", "--model", ws.file("model.json"), "--data", ws.file("train.tsv"),
                   "--out", ws.file("eval.json")});
    REQUIRE(ev.code == 0);
    // Evaluating on the training file reproduces the training accuracy.
    CHECK(ev.out.find("(" + trained[2].str() + "/60)") != std::string::npos);
    const auto metrics = nlohmann::json::parse(read_file(ws.file("eval.json")));
    std::size_t total = 0;
    for (const auto& row : metrics["confusion"]) {
      for (const auto& v : row) total += v.get<std::size_t>();
    }
    CHECK(total == 60);

    auto ex = run({"explain", cfg, "--model", ws.file("model.json"), "--data",
                   ws.file("test.tsv"), "--train", ws.file("train.tsv"), "--sample", "1",
                   "--sample", "2", "--global", "1", "--out", ws.file("report.json")});
    CHECK((ex.code == 0 || ex.code == 2));
    CHECK(ex.out.find("E_l = ") != std::string::npos);
    CHECK(ex.out.find("NOT SOUND") == std::string::npos);
    const auto report = nlohmann::json::parse(read_file(ws.file("report.json")));
    REQUIRE(report["local"].size() == 2);
    const ConceptModel model = load_model(ws.file("model.json"));
    const Dataset test = standardize(load_dataset(ws.file("test.tsv")), Standardization::kApply,
                                     &*model.normalization);
    for (const auto& local : report["local"]) {
      for (const char* key : {"sample_id", "predicted", "conjuncts", "explanation", "robustness"}) {
        CHECK(local.contains(key));
      }
      const Formula e = parse_formula(local["explanation"].get<std::string>());
      CHECK(robustness(e, test.samples[local["sample_id"].get<std::size_t>()]) > 0.0);
    }
    REQUIRE(report["global"].size() == 1);
    for (const char* key : {"class", "disjuncts", "explanation", "coverage", "leakage", "cost"}) {
      CHECK(report["global"][0].contains(key));
    }
    run({"explain", cfg, "--model", ws.file("model.json"), "--data", ws.file("test.tsv"),
         "--train", ws.file("train.tsv"), "--sample", "1", "--sample", "2", "--global", "1",
         "--out", ws.file("report2.json")});
    CHECK(read_file(ws.file("report.json")) == read_file(ws.file("report2.json")));
  }

  TEST_CASE("config paths and flag precedence") {
    Workspace ws;
    auto gen = run({"gen-concepts", "--config", ws.file("run.toml"), "--selection.n_target=10",
                    "--io.bank=" + ws.file("from_io.json")});
    REQUIRE(gen.code == 0);
    CHECK(parse_bank(read_file(ws.file("from_io.json"))).size() == 10);
  }

  TEST_CASE("partial bank exits with code 2") {
    Workspace ws;
    auto gen = run({"gen-concepts", "--measure.M=50", "--selection.n_target=30",
                    "--selection.sim_threshold=0.05", "--selection.max_attempts=50", "--out",
                    ws.file("p.json")});
    CHECK(gen.code == 2);
    CHECK(gen.err.find("warning") != std::string::npos);
  }

  TEST_CASE("usage and input errors exit with code 1") {
    Workspace ws;
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"gen-concepts", "--measure.M"}).code == 1);
    CHECK(run({"gen-concepts", "--nope.key=1", "--out", ws.file("x.json")}).code == 1);
    auto missing = run({"train", "--data", ws.file("train.tsv"), "--bank", ws.file("none.json"),
                        "--out", ws.file("m.json")});
    CHECK(missing.code == 1);
    CHECK(missing.err.find("none.json") != std::string::npos);
    CHECK(run({"train", "--data", ws.file("train.tsv")}).code == 1);
    CHECK(run({"gen-concepts", "--config", ws.file("absent.toml")}).code == 1);
  }

  TEST_CASE("unknown label in an evaluation file") {
    Workspace ws;
    const std::string cfg = "--config=" + ws.file("run.toml");
    run({"gen-concepts", cfg, "--out", ws.file("bank.json")});
    run({"train", cfg, "--data", ws.file("train.tsv"), "--bank", ws.file("bank.json"), "--out",
         ws.file("model.json")});
    Dataset odd = testing::spike_dataset(2, 30, 3);
    odd.class_names = {"0", "7"};
    write_ucr_tsv(odd, ws.file("odd.tsv"));
    auto ev = run({"evaluate", "--model", ws.file("model.json"), "--data", ws.file("odd.tsv")});
    CHECK(ev.code == 1);
    CHECK(ev.err.find("unknown label") != std::string::npos);
  }

  TEST_CASE("monitor prints robustness and verdicts") {
    Workspace ws;
    Dataset ds;
    ds.class_names = {"a", "b"};
    ds.samples = {Trajectory(1, 3, {0.5, 0.5, 0.5}), Trajectory(1, 3, {0.2, 0.2, 0.2}),
                  Trajectory(1, 3, {0.0, 0.1, 0.0})};
    ds.labels = {0, 1, 1};
    write_ucr_tsv(ds, ws.file("m.tsv"));
    auto mon = run({"monitor", "--formula", "x0 >= 0.2", "--data", ws.file("m.tsv")});
    REQUIRE(mon.code == 0);
    std::istringstream lines(mon.out);
    std::string header, first, second, third;
    std::getline(lines, header);
    std::getline(lines, first);
    std::getline(lines, second);
    std::getline(lines, third);
    CHECK(header == "sample\tlabel\trobustness\tverdict");
    CHECK(first == "0\ta\t0.3\ttrue");
    CHECK(second == "1\tb\t0\ttrue");
    CHECK(third == "2\tb\t-0.2\tfalse");

    auto bad = run({"monitor", "--formula", "F[0,2](x0 >= ", "--data", ws.file("m.tsv")});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("line 1, column") != std::string::npos);
  }

  TEST_CASE("kernel subcommand") {
    Workspace ws;
    auto gram = run({"kernel", "--measure.M=50", "--measure.T=30", "--formula", "x0 >= 0",
                     "--formula", "not (x0 >= 0)"});
    REQUIRE(gram.code == 0);
    CHECK(gram.out.find("epsilon\t") != std::string::npos);
    auto cross = run({"kernel", "--measure.M=50", "--measure.T=30", "--kernel.epsilon=3",
                      "--formula", "F[0,5](x0 >= 0.8)", "--data", ws.file("test.tsv")});
    CHECK(cross.code == 0);
    CHECK(cross.out.find("epsilon\t3") != std::string::npos);
  }
}
