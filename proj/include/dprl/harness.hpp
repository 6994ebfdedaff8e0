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
// Experiment sweeps over (mechanism, epsilon, run), their CSV outputs and the
// smooth-versus-global noise scale table.

#ifndef DPRL_HARNESS_HPP_
#define DPRL_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dprl/dataset.hpp"
#include "dprl/learner.hpp"
#include "dprl/mechanisms.hpp"

namespace dprl {

struct SweepSpec {
  std::filesystem::path data;  // prepared 0/1 CSV
  std::string label;
  std::vector<MechanismKind> mechanisms;  // kNonPrivate is the greedy baseline
  std::vector<double> epsilons;
  int runs = 30;
  std::uint64_t base_seed = 1;
  int max_length = 5;
  double lambda = 0.05;
  double confidence = 0.99;
  double gamma = 2.0;
  int max_arity = 2;
  double min_support = 0.0;  // mining filter
  double train_fraction = 0.7;
  bool release_counts = true;
  std::optional<double> delta;  // default 1 / n_train^2
  int threads = 1;              // 0 = one per hardware thread
  bool timing = false;          // wall_ms stays 0 unless set, keeping files reproducible

  // Throws UsageError on empty lists, non-positive or unsorted epsilons,
  // runs < 1 and out-of-range learner parameters.
  void Validate() const;
};

// 12 log-spaced points from 0.01 to 100.
std::vector<double> DefaultEpsilonGrid();

// key = value lines. Keys: data, recipe, label, mechanisms, epsilons
// ("default" or a comma list), runs, seed, max_length, lambda, confidence,
// gamma, max_arity, min_support, train_fraction, release_counts, delta,
// threads, timing. Relative paths resolve against base_dir; recipe values
// apply first and explicit keys override them.
SweepSpec ParseSweepSpec(const std::string& text, const std::filesystem::path& base_dir);
SweepSpec LoadSweepSpec(const std::filesystem::path& path);

struct SweepRecord {
  MechanismKind mechanism = MechanismKind::kNonPrivate;
  double epsilon = 0.0;
  int run = 0;
  std::uint64_t seed = 0;
  double test_accuracy = 0.0;
  double vulnerability = 0.0;
  int length = 0;  // rules including the default
  std::string stop_reason;
  double wall_ms = 0.0;
  bool failed = false;
  std::string error;
  bool audit_ok = true;
};

struct SweepResult {
  std::vector<SweepRecord> records;  // ordered by (mechanism, epsilon, run)
};

struct SweepAggregate {
  MechanismKind mechanism = MechanismKind::kNonPrivate;
  double epsilon = 0.0;
  double mean_acc = 0.0;
  double std_acc = 0.0;
  double mean_vuln = 0.0;
  double std_vuln = 0.0;
  int count = 0;
};

// Seeds used for the split of `run` and for the noise of one record.
std::uint64_t SplitSeed(std::uint64_t base_seed, int run);
std::uint64_t RecordSeed(std::uint64_t base_seed, MechanismKind mechanism, std::size_t eps_index,
                         int run);

SweepResult RunSweep(const SweepSpec& spec);
SweepResult RunSweep(const SweepSpec& spec, const BinaryDataset& data);

// Mean and sample standard deviation per (mechanism, epsilon), skipping failed records.
std::vector<SweepAggregate> Aggregate(const SweepResult& result);

void WriteResultsCsv(const SweepResult& result, std::ostream& out);
void WriteAggregateCsv(const std::vector<SweepAggregate>& aggregates, std::ostream& out);

struct NoiseScaleRow {
  std::size_t n = 0;
  double smooth_scale = 0.0;  // 2 S*(n) / eps_node
  double global_scale = 0.0;  // 2 * 0.5 / eps_node
};

// Throws UsageError if some n < lambda_abs.
std::vector<NoiseScaleRow> NoiseScaleTable(const std::vector<std::size_t>& n_grid,
                                           std::size_t lambda_abs, double epsilon, double delta,
                                           int max_length, bool release_counts = true);
void WriteNoiseScaleCsv(const std::vector<NoiseScaleRow>& rows, std::ostream& out);

// Shortest round-trip decimal form.
std::string FormatDouble(double value);

}  // namespace dprl

#endif  // DPRL_HARNESS_HPP_
