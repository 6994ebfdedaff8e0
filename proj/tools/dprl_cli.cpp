// Copyright 2026 The dprl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// dprl: command-line front end.
//
//   dprl prepare     --raw adult.csv --recipe recipes/adult.cfg --output adult01.csv
//   dprl mine        --data adult01.csv --label income --output rules.json
//   dprl train       --data adult01.csv --label income --mechanism sm-laplace --epsilon 10
//   dprl evaluate    --data adult01.csv --label income --model model.json --split-seed 7
//   dprl sweep       --config sweeps/compas.cfg --output-dir out/
//   dprl noise-table --lambda-abs 50 --epsilon 1 --delta 1e-6
//   dprl audit       --trace trace.json
//
// Exit codes: 0 ok, 1 usage error, 2 data error, 3 invariant or audit failure.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dprl/budget.hpp"
#include "dprl/dataset.hpp"
#include "dprl/errors.hpp"
#include "dprl/evaluation.hpp"
#include "dprl/gini.hpp"
#include "dprl/harness.hpp"
#include "dprl/kernels.hpp"
#include "dprl/learner.hpp"
#include "dprl/mechanisms.hpp"
#include "dprl/rulelist.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInvariant = 3;

json ReadJson(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw dprl::DataError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw dprl::DataError(path.string() + ": " + e.what());
  }
}

// Writes to `path`, or stdout when it is empty or "-".
void Emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw dprl::DataError("cannot write " + path);
  out << content;
}

struct SplitFlags {
  double train_fraction = 0.7;
  std::optional<std::uint64_t> split_seed;
};

void AddSplitFlags(CLI::App* cmd, SplitFlags* f) {
  cmd->add_option("--train-fraction", f->train_fraction,
                  "Fraction of rows used for training; 1 trains on everything")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--split-seed", f->split_seed, "Seed of the train/test shuffle");
}

std::pair<dprl::BinaryDataset, dprl::BinaryDataset> SplitData(const dprl::BinaryDataset& data,
                                                              double fraction,
                                                              std::uint64_t seed) {
  if (!(fraction > 0.0)) throw dprl::UsageError("--train-fraction must be positive");
  if (fraction >= 1.0) return {data, dprl::BinaryDataset{}};
  return dprl::Split(data, fraction, seed);
}

int Run(int argc, char** argv) {
  CLI::App app{"Differentially-private greedy rule lists"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "dprl 0.1.0");

  // prepare
  std::string raw_path, recipe_path, prepared_out;
  auto* prepare = app.add_subcommand("prepare", "Binarize a raw CSV according to a recipe");
  prepare->add_option("--raw", raw_path, "Raw CSV with a header row")->required();
  prepare->add_option("--recipe", recipe_path, "Recipe file (key = value lines)")->required();
  prepare->add_option("--output", prepared_out, "Output 0/1 CSV")->required();

  // mine
  std::string mine_data, mine_label, mine_recipe, mine_out;
  int mine_arity = 2;
  double mine_support = 0.0;
  auto* mine = app.add_subcommand("mine", "Enumerate candidate rules over a 0/1 dataset");
  mine->add_option("--data", mine_data, "Prepared 0/1 CSV")->required();
  mine->add_option("--label", mine_label, "Label column")->required();
  mine->add_option("--recipe", mine_recipe, "Take max_arity and min_support from a recipe");
  mine->add_option("--max-arity", mine_arity, "Largest conjunction size (1 or 2)")
      ->check(CLI::Range(1, 2))
      ->capture_default_str();
  mine->add_option("--min-support", mine_support, "Minimum fraction of rows a rule must cover")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  mine->add_option("--output", mine_out, "Rule set JSON (default stdout)");

  // train
  std::string train_data, train_label, train_rules, train_mech = "sm-laplace", train_out,
                                                      train_trace;
  double train_eps = 1.0, train_lambda = 0.05, train_conf = 0.99, train_gamma = 2.0;
  std::optional<double> train_delta;
  int train_k = 5;
  std::optional<std::uint64_t> train_seed;
  bool release_counts = false;
  int train_arity = 2;
  double train_support = 0.0;
  SplitFlags train_split;
  auto* train = app.add_subcommand("train", "Fit one rule list and write it as JSON");
  train->add_option("--data", train_data, "Prepared 0/1 CSV")->required();
  train->add_option("--label", train_label, "Label column")->required();
  train->add_option("--rules", train_rules,
                    "Rule set JSON from `mine`; mined on the training split when absent");
  train->add_option("--max-arity", train_arity, "Arity used when mining on the fly")
      ->check(CLI::Range(1, 2))
      ->capture_default_str();
  train->add_option("--min-support", train_support, "Mining support filter when mining on the fly")
      ->capture_default_str();
  train->add_option("--mechanism", train_mech,
                    "none, sm-laplace, sm-cauchy, gl-laplace, gl-gaussian, exponential, "
                    "noisy-counts")
      ->capture_default_str();
  train->add_option("--epsilon", train_eps, "Total privacy budget epsilon")->capture_default_str();
  train->add_option("--delta", train_delta, "Total delta (default 1/n_train^2)");
  train->add_option("--max-length", train_k, "Maximum rule-list length K, default rule included")
      ->capture_default_str();
  train->add_option("--lambda", train_lambda, "Minimum support as a fraction of training rows")
      ->capture_default_str();
  train->add_option("--confidence", train_conf, "Confidence C of the support check")
      ->capture_default_str();
  train->add_option("--gamma", train_gamma, "Tail exponent of the smooth Cauchy mechanism")
      ->capture_default_str();
  train->add_option("--seed", train_seed, "Noise seed (drawn from system entropy when absent)");
  train->add_flag("--release-counts", release_counts,
                  "Publish noisy label counts with every rule (budget split 3K-1)");
  AddSplitFlags(train, &train_split);
  train->add_option("--output", train_out, "Model JSON (default stdout)");
  train->add_option("--trace", train_trace, "Write the training trace JSON here");

  // evaluate
  std::string eval_data, eval_label, eval_model;
  SplitFlags eval_split;
  auto* evaluate = app.add_subcommand("evaluate", "Accuracy and vulnerability of a model");
  evaluate->add_option("--data", eval_data, "Prepared 0/1 CSV")->required();
  evaluate->add_option("--label", eval_label, "Label column")->required();
  evaluate->add_option("--model", eval_model, "Model JSON from `train`")->required();
  AddSplitFlags(evaluate, &eval_split);

  // sweep
  std::string sweep_config, sweep_dir;
  std::optional<int> sweep_threads;
  std::optional<int> sweep_runs;
  auto* sweep = app.add_subcommand("sweep", "Run an epsilon sweep described by a config file");
  sweep->add_option("--config", sweep_config, "Sweep config (key = value lines)")->required();
  sweep->add_option("--output-dir", sweep_dir, "Directory for results.csv and aggregate.csv")
      ->required();
  sweep->add_option("--threads", sweep_threads, "Worker threads (0 = all cores)");
  sweep->add_option("--runs", sweep_runs, "Override the number of runs");

  // noise-table
  std::vector<std::size_t> nt_grid;
  std::size_t nt_lambda = 1;
  double nt_eps = 1.0, nt_delta = 1e-6;
  int nt_k = 5;
  bool nt_sensitivity = false;
  bool nt_no_release = false;
  std::string nt_out;
  auto* noise = app.add_subcommand("noise-table", "Smooth versus global Laplace noise scales");
  noise->add_option("--n", nt_grid, "Remaining-sample counts (default 1..10^5, log-spaced)")
      ->delimiter(',');
  noise->add_option("--lambda-abs", nt_lambda, "Absolute minimum support Lambda")
      ->capture_default_str();
  noise->add_option("--epsilon", nt_eps, "Total epsilon")->capture_default_str();
  noise->add_option("--delta", nt_delta, "Total delta")->capture_default_str();
  noise->add_option("--max-length", nt_k, "K")->capture_default_str();
  noise->add_flag("--no-release-counts", nt_no_release, "Use the 2K-1 budget split");
  noise->add_flag("--sensitivity", nt_sensitivity,
                  "Emit n,local,smooth sensitivities instead of noise scales");
  noise->add_option("--output", nt_out, "CSV path (default stdout)");

  // audit
  std::string audit_trace;
  auto* audit = app.add_subcommand("audit", "Replay a training trace and check its budget");
  audit->add_option("--trace", audit_trace, "Trace JSON written by `train --trace`")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (prepare->parsed()) {
    const dprl::Recipe recipe = dprl::LoadRecipe(recipe_path);
    std::vector<std::string> warnings;
    const dprl::BinaryDataset data =
        dprl::Binarize(dprl::ReadRawCsv(raw_path), recipe.binarize, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    dprl::WriteCsv(data, prepared_out, recipe.binarize.label_column);
    std::cerr << "wrote " << data.rows() << " rows x " << data.features() << " features to "
              << prepared_out << '\n';
    return 0;
  }

  if (mine->parsed()) {
    if (!mine_recipe.empty()) {
      const dprl::Recipe r = dprl::LoadRecipe(mine_recipe);
      mine_arity = r.max_arity;
      mine_support = r.min_support;
    }
    const dprl::BinaryDataset data = dprl::LoadCsv(mine_data, mine_label);
    const dprl::MinedRuleSet rules = dprl::MineRules(data, mine_arity, mine_support);
    Emit(mine_out, dprl::MinedRulesToJson(rules, data.feature_names()).dump(2) + "\n");
    std::cerr << rules.size() << " rules\n";
    return 0;
  }

  if (train->parsed()) {
    const dprl::MechanismKind mech = dprl::ParseMechanism(train_mech);
    if (!(train_eps > 0.0)) throw dprl::UsageError("--epsilon must be positive");
    if (!train_seed) {
      train_seed = (static_cast<std::uint64_t>(std::random_device{}()) << 32) ^
                   std::random_device{}();
      std::cerr << "seed: " << *train_seed << '\n';
    }
    const std::uint64_t split_seed = train_split.split_seed.value_or(*train_seed);
    const dprl::BinaryDataset data = dprl::LoadCsv(train_data, train_label);
    auto [tr, te] = SplitData(data, train_split.train_fraction, split_seed);
    const dprl::MinedRuleSet rules =
        train_rules.empty() ? dprl::MineRules(tr, train_arity, train_support)
                            : dprl::MinedRulesFromJson(ReadJson(train_rules), data.feature_names());
    dprl::LearnerConfig cfg;
    cfg.max_length = train_k;
    cfg.min_support = train_lambda;
    cfg.confidence = train_conf;
    cfg.mechanism = mech;
    cfg.gamma = train_gamma;
    cfg.seed = *train_seed;
    if (mech != dprl::MechanismKind::kNonPrivate) {
      const double n = static_cast<double>(tr.rows());
      cfg.budget = dprl::MakeBudget(train_eps, train_delta.value_or(1.0 / (n * n)), train_k,
                                    release_counts);
    }
    const dprl::TrainResult fit = dprl::Train(tr, rules, cfg);
    Emit(train_out, ToJson(fit.model, data.feature_names()).dump(2) + "\n");
    if (!train_trace.empty()) Emit(train_trace, dprl::TraceToJson(fit.trace).dump(2) + "\n");
    std::cerr << dprl::PrettyPrint(fit.model, data.feature_names())
              << "stop: " << dprl::StopReasonName(fit.trace.stop) << ", split seed " << split_seed
              << '\n';
    return 0;
  }

  if (evaluate->parsed()) {
    if (!eval_split.split_seed) throw dprl::UsageError("evaluate needs --split-seed");
    const dprl::BinaryDataset data = dprl::LoadCsv(eval_data, eval_label);
    const dprl::RuleList model = dprl::RuleListFromJson(ReadJson(eval_model), data.feature_names());
    if (!(eval_split.train_fraction < 1.0)) {
      throw dprl::UsageError("evaluate needs a held-out split (--train-fraction < 1)");
    }
    const auto [tr, te] = dprl::Split(data, eval_split.train_fraction, *eval_split.split_seed);
    std::cout << dprl::EvaluationJson(model, tr, te).dump(2) << '\n';
    return 0;
  }

  if (sweep->parsed()) {
    dprl::SweepSpec spec = dprl::LoadSweepSpec(sweep_config);
    if (sweep_threads) spec.threads = *sweep_threads;
    if (sweep_runs) spec.runs = *sweep_runs;
    std::cerr << "kernels: " << dprl::kernels::active().name << '\n';
    const dprl::SweepResult result = dprl::RunSweep(spec);
    std::filesystem::create_directories(sweep_dir);
    std::ostringstream records, aggregates;
    dprl::WriteResultsCsv(result, records);
    dprl::WriteAggregateCsv(dprl::Aggregate(result), aggregates);
    Emit((std::filesystem::path(sweep_dir) / "results.csv").string(), records.str());
    Emit((std::filesystem::path(sweep_dir) / "aggregate.csv").string(), aggregates.str());
    int failed = 0;
    bool audit_ok = true;
    for (const auto& r : result.records) {
      failed += r.failed ? 1 : 0;
      audit_ok = audit_ok && r.audit_ok;
    }
    if (failed > 0) std::cerr << failed << " records failed\n";
    if (!audit_ok) {
      std::cerr << "budget audit failed on at least one record\n";
      return kExitInvariant;
    }
    return 0;
  }

  if (noise->parsed()) {
    if (nt_grid.empty()) {
      for (double x = 0.0; x <= 5.0 + 1e-9; x += 0.25) {
        const auto n = static_cast<std::size_t>(std::llround(std::pow(10.0, x)));
        if (n >= nt_lambda && (nt_grid.empty() || nt_grid.back() != n)) nt_grid.push_back(n);
      }
    }
    std::ostringstream out;
    if (nt_sensitivity) {
      const dprl::PrivacyBudget b = dprl::MakeBudget(nt_eps, nt_delta, nt_k, !nt_no_release);
      out << "n,local,smooth\n";
      for (std::size_t n : nt_grid) {
        if (n < nt_lambda) throw dprl::UsageError("every --n must be at least --lambda-abs");
        out << n << ',' << dprl::FormatDouble(dprl::LocalSensitivity(n)) << ','
            << dprl::FormatDouble(dprl::SmoothSensitivity({n, nt_lambda, b.beta})) << '\n';
      }
    } else {
      dprl::WriteNoiseScaleCsv(
          dprl::NoiseScaleTable(nt_grid, nt_lambda, nt_eps, nt_delta, nt_k, !nt_no_release), out);
    }
    Emit(nt_out, out.str());
    return 0;
  }

  if (audit->parsed()) {
    const dprl::TrainTrace trace = dprl::TraceFromJson(ReadJson(audit_trace));
    if (trace.mechanism == dprl::MechanismKind::kNonPrivate) {
      std::cout << R"({"ok": true, "note": "non-private trace, nothing to audit"})" << '\n';
      return 0;
    }
    const dprl::AuditReport report = dprl::AuditTrace(trace);
    const json j = {{"ok", report.ok},
                    {"epsilon_spent", report.epsilon_spent},
                    {"epsilon_total", trace.budget.epsilon_total},
                    {"delta_spent", report.delta_spent},
                    {"delta_total", trace.budget.delta_total},
                    {"max_node_charges", report.max_node_charges},
                    {"problems", report.problems}};
    std::cout << j.dump(2) << '\n';
    return report.ok ? 0 : kExitInvariant;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return Run(argc, argv);
  } catch (const dprl::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const dprl::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const dprl::InvariantError& e) {
    std::cerr << "invariant violated: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvariant;
  }
}
