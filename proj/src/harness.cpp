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
#include "dprl/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "dprl/budget.hpp"
#include "dprl/errors.hpp"
#include "dprl/evaluation.hpp"
#include "dprl/gini.hpp"
#include "dprl/rng.hpp"
#include "text.hpp"

namespace dprl {
namespace {

std::filesystem::path Resolve(const std::filesystem::path& base, const std::string& value) {
  const std::filesystem::path p(value);
  return p.is_absolute() ? p : base / p;
}

std::uint64_t MechanismTag(MechanismKind kind) {
  return static_cast<std::uint64_t>(kind) + 1;
}

}  // namespace

std::string FormatDouble(double value) { return text::FormatNumber(value); }

std::vector<double> DefaultEpsilonGrid() {
  std::vector<double> grid;
  for (int i = 0; i < 12; ++i) grid.push_back(std::pow(10.0, -2.0 + 4.0 * i / 11.0));
  return grid;
}

void SweepSpec::Validate() const {
  if (mechanisms.empty()) throw UsageError("sweep: no mechanisms given");
  if (epsilons.empty()) throw UsageError("sweep: empty epsilon grid");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0) || !std::isfinite(epsilons[i])) {
      throw UsageError("sweep: epsilon values must be positive, got " + FormatDouble(epsilons[i]));
    }
    if (i > 0 && !(epsilons[i] > epsilons[i - 1])) {
      throw UsageError("sweep: epsilon grid must be strictly increasing");
    }
  }
  if (runs < 1) throw UsageError("sweep: runs must be at least 1");
  if (max_length < 2) throw UsageError("sweep: max_length must be at least 2");
  if (!(lambda > 0.0 && lambda < 1.0)) throw UsageError("sweep: lambda must lie in (0, 1)");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw UsageError("sweep: confidence must lie in (0, 1)");
  }
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw UsageError("sweep: train_fraction must lie in (0, 1)");
  }
  if (max_arity < 1 || max_arity > 2) throw UsageError("sweep: max_arity must be 1 or 2");
  if (delta && !(*delta > 0.0 && *delta < 1.0)) throw UsageError("sweep: delta must lie in (0, 1)");
  if (threads < 0) throw UsageError("sweep: threads must be non-negative");
  if (label.empty()) throw UsageError("sweep: label is required");
}

SweepSpec ParseSweepSpec(const std::string& content, const std::filesystem::path& base_dir) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::stringstream ss(content);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = text::Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("sweep config line " + std::to_string(line_no) + ": expected key=value");
    }
    entries.emplace_back(text::Trim(line.substr(0, eq)), text::Trim(line.substr(eq + 1)));
  }

  SweepSpec spec;
  spec.mechanisms = {MechanismKind::kNonPrivate, MechanismKind::kSmoothLaplace};
  spec.epsilons = DefaultEpsilonGrid();
  for (const auto& [key, value] : entries) {
    if (key != "recipe") continue;
    const Recipe r = LoadRecipe(Resolve(base_dir, value));
    spec.label = r.binarize.label_column;
    spec.max_arity = r.max_arity;
    spec.min_support = r.min_support;
    spec.lambda = r.lambda;
    spec.max_length = r.max_length;
    spec.confidence = r.confidence;
  }
  auto number = [](const std::string& key, const std::string& v) {
    double d;
    if (!text::ParseDouble(v, &d)) throw UsageError("sweep config: bad number for " + key);
    return d;
  };
  auto integer = [](const std::string& key, const std::string& v) {
    long long i;
    if (!text::ParseInt(v, &i)) throw UsageError("sweep config: bad integer for " + key);
    return i;
  };
  auto boolean = [](const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw UsageError("sweep config: bad boolean for " + key);
  };
  for (const auto& [key, value] : entries) {
    if (key == "recipe") {
      continue;
    } else if (key == "data") {
      spec.data = Resolve(base_dir, value);
    } else if (key == "label") {
      spec.label = value;
    } else if (key == "mechanisms") {
      spec.mechanisms.clear();
      for (const auto& name : text::SplitList(value)) spec.mechanisms.push_back(ParseMechanism(name));
    } else if (key == "epsilons") {
      if (value == "default") {
        spec.epsilons = DefaultEpsilonGrid();
      } else {
        spec.epsilons.clear();
        for (const auto& v : text::SplitList(value)) spec.epsilons.push_back(number(key, v));
      }
    } else if (key == "runs") {
      spec.runs = static_cast<int>(integer(key, value));
    } else if (key == "seed") {
      std::uint64_t s;
      if (!text::ParseInt(value, &s)) throw UsageError("sweep config: bad seed");
      spec.base_seed = s;
    } else if (key == "max_length") {
      spec.max_length = static_cast<int>(integer(key, value));
    } else if (key == "lambda") {
      spec.lambda = number(key, value);
    } else if (key == "confidence") {
      spec.confidence = number(key, value);
    } else if (key == "gamma") {
      spec.gamma = number(key, value);
    } else if (key == "max_arity") {
      spec.max_arity = static_cast<int>(integer(key, value));
    } else if (key == "min_support") {
      spec.min_support = number(key, value);
    } else if (key == "train_fraction") {
      spec.train_fraction = number(key, value);
    } else if (key == "release_counts") {
      spec.release_counts = boolean(key, value);
    } else if (key == "delta") {
      spec.delta = number(key, value);
    } else if (key == "threads") {
      spec.threads = static_cast<int>(integer(key, value));
    } else if (key == "timing") {
      spec.timing = boolean(key, value);
    } else {
      throw UsageError("sweep config: unknown key '" + key + "'");
    }
  }
  if (spec.data.empty()) throw UsageError("sweep config: data is required");
  spec.Validate();
  return spec;
}

SweepSpec LoadSweepSpec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open sweep config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseSweepSpec(ss.str(), path.parent_path());
}

std::uint64_t SplitSeed(std::uint64_t base_seed, int run) {
  return HashSeed({base_seed, 0x5b117ULL, static_cast<std::uint64_t>(run)});
}

std::uint64_t RecordSeed(std::uint64_t base_seed, MechanismKind mechanism, std::size_t eps_index,
                         int run) {
  return HashSeed({base_seed, MechanismTag(mechanism), static_cast<std::uint64_t>(eps_index),
                   static_cast<std::uint64_t>(run)});
}

SweepResult RunSweep(const SweepSpec& spec) {
  spec.Validate();
  return RunSweep(spec, LoadCsv(spec.data, spec.label));
}

SweepResult RunSweep(const SweepSpec& spec, const BinaryDataset& data) {
  spec.Validate();
  const std::size_t n_mech = spec.mechanisms.size();
  const std::size_t n_eps = spec.epsilons.size();
  const auto runs = static_cast<std::size_t>(spec.runs);
  SweepResult result;
  result.records.resize(n_mech * n_eps * runs);

  // One task per run: split, mine, then every (mechanism, epsilon). Each
  // record's slot is fixed by its key, so the output ignores scheduling.
  auto do_run = [&](int run) {
    const auto [train, test] = Split(data, spec.train_fraction, SplitSeed(spec.base_seed, run));
    std::optional<MinedRuleSet> rules;
    std::string mine_error;
    try {
      rules = MineRules(train, spec.max_arity, spec.min_support);
    } catch (const Error& e) {
      mine_error = e.what();
    }
    const double delta = spec.delta.value_or(
        1.0 / (static_cast<double>(train.rows()) * static_cast<double>(train.rows())));
    std::optional<RuleList> baseline;
    std::string baseline_stop;
    for (std::size_t m = 0; m < n_mech; ++m) {
      for (std::size_t e = 0; e < n_eps; ++e) {
        SweepRecord& rec = result.records[(m * n_eps + e) * runs + static_cast<std::size_t>(run)];
        rec.mechanism = spec.mechanisms[m];
        rec.epsilon = spec.epsilons[e];
        rec.run = run;
        rec.seed = RecordSeed(spec.base_seed, rec.mechanism, e, run);
        const auto start = std::chrono::steady_clock::now();
        try {
          if (!rules) throw DataError(mine_error);
          LearnerConfig cfg;
          cfg.max_length = spec.max_length;
          cfg.min_support = spec.lambda;
          cfg.confidence = spec.confidence;
          cfg.mechanism = rec.mechanism;
          cfg.gamma = spec.gamma;
          cfg.seed = rec.seed;
          RuleList model = RuleList::Default(true);
          if (rec.mechanism == MechanismKind::kNonPrivate) {
            // The greedy baseline ignores epsilon; fit it once per run.
            if (!baseline) {
              StopReason stop;
              baseline = GreedyRl(train, *rules, cfg, &stop);
              baseline_stop = StopReasonName(stop);
            }
            model = *baseline;
            rec.stop_reason = baseline_stop;
          } else {
            cfg.budget = MakeBudget(rec.epsilon, delta, spec.max_length, spec.release_counts);
            TrainResult fit = DpGreedyRl(train, *rules, cfg);
            rec.audit_ok = AuditTrace(fit.trace).ok;
            rec.stop_reason = StopReasonName(fit.trace.stop);
            model = std::move(fit.model);
          }
          rec.test_accuracy = Accuracy(model, test);
          rec.vulnerability = Vulnerability(model, train, test).overall;
          rec.length = static_cast<int>(model.size());
        } catch (const Error& err) {
          rec.failed = true;
          rec.error = err.what();
          rec.stop_reason = "FAILED";
          rec.test_accuracy = std::nan("");
          rec.vulnerability = std::nan("");
        }
        if (spec.timing) {
          rec.wall_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
        }
      }
    }
  };

  unsigned workers = spec.threads == 0 ? std::max(1U, std::thread::hardware_concurrency())
                                       : static_cast<unsigned>(spec.threads);
  workers = std::min<unsigned>(workers, static_cast<unsigned>(spec.runs));
  if (workers <= 1) {
    for (int run = 0; run < spec.runs; ++run) do_run(run);
    return result;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mu;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int run = next++; run < spec.runs; run = next++) {
        try {
          do_run(run);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return result;
}

std::vector<SweepAggregate> Aggregate(const SweepResult& result) {
  std::vector<SweepAggregate> out;
  std::map<std::pair<int, double>, std::size_t> slot;
  std::vector<std::vector<const SweepRecord*>> groups;
  for (const SweepRecord& r : result.records) {
    const auto key = std::make_pair(static_cast<int>(r.mechanism), r.epsilon);
    auto [it, inserted] = slot.try_emplace(key, out.size());
    if (inserted) {
      out.push_back({r.mechanism, r.epsilon});
      groups.emplace_back();
    }
    if (!r.failed) groups[it->second].push_back(&r);
  }
  auto stats = [](const std::vector<double>& v, double* mean, double* sd) {
    *mean = 0.0;
    *sd = 0.0;
    if (v.empty()) {
      *mean = std::nan("");
      *sd = std::nan("");
      return;
    }
    for (double x : v) *mean += x;
    *mean /= static_cast<double>(v.size());
    if (v.size() < 2) return;
    double ss = 0.0;
    for (double x : v) ss += (x - *mean) * (x - *mean);
    *sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  };
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::vector<double> acc;
    std::vector<double> vuln;
    for (const SweepRecord* r : groups[i]) {
      acc.push_back(r->test_accuracy);
      vuln.push_back(r->vulnerability);
    }
    out[i].count = static_cast<int>(acc.size());
    stats(acc, &out[i].mean_acc, &out[i].std_acc);
    stats(vuln, &out[i].mean_vuln, &out[i].std_vuln);
  }
  return out;
}

void WriteResultsCsv(const SweepResult& result, std::ostream& out) {
  out << "mechanism,epsilon,run,seed,test_accuracy,vulnerability,length,stop_reason,wall_ms\n";
  for (const SweepRecord& r : result.records) {
    out << MechanismName(r.mechanism) << ',' << FormatDouble(r.epsilon) << ',' << r.run << ','
        << r.seed << ',' << FormatDouble(r.test_accuracy) << ',' << FormatDouble(r.vulnerability)
        << ',' << r.length << ',' << r.stop_reason << ',' << FormatDouble(r.wall_ms) << '\n';
  }
}

void WriteAggregateCsv(const std::vector<SweepAggregate>& aggregates, std::ostream& out) {
  out << "mechanism,epsilon,mean_acc,std_acc,mean_vuln,std_vuln\n";
  for (const SweepAggregate& a : aggregates) {
    out << MechanismName(a.mechanism) << ',' << FormatDouble(a.epsilon) << ','
        << FormatDouble(a.mean_acc) << ',' << FormatDouble(a.std_acc) << ','
        << FormatDouble(a.mean_vuln) << ',' << FormatDouble(a.std_vuln) << '\n';
  }
}

std::vector<NoiseScaleRow> NoiseScaleTable(const std::vector<std::size_t>& n_grid,
                                           std::size_t lambda_abs, double epsilon, double delta,
                                           int max_length, bool release_counts) {
  const PrivacyBudget budget = MakeBudget(epsilon, delta, max_length, release_counts);
  std::vector<NoiseScaleRow> rows;
  for (std::size_t n : n_grid) {
    if (n < lambda_abs) {
      throw UsageError("noise table: n = " + std::to_string(n) + " is below the minimum support " +
                       std::to_string(lambda_abs));
    }
    const double s_star = SmoothSensitivity({n, lambda_abs, budget.beta});
    rows.push_back({n, 2.0 * s_star / budget.epsilon_node, 2.0 * 0.5 / budget.epsilon_node});
  }
  return rows;
}

void WriteNoiseScaleCsv(const std::vector<NoiseScaleRow>& rows, std::ostream& out) {
  out << "n,smooth_scale,global_scale\n";
  for (const NoiseScaleRow& r : rows) {
    out << r.n << ',' << FormatDouble(r.smooth_scale) << ',' << FormatDouble(r.global_scale)
        << '\n';
  }
}

}  // namespace dprl
