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
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dprl/dataset.hpp"
#include "dprl/errors.hpp"
#include "dprl/harness.hpp"
#include "gtest/gtest.h"

namespace dprl {
namespace {

BinaryDataset Synthetic(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::uint8_t>> rows(n, std::vector<std::uint8_t>(5));
  std::vector<std::uint8_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : rows[i]) v = rng() & 1U;
    labels[i] = rng() % 4 == 0 ? (rng() & 1U) : (rows[i][0] | rows[i][3]);
  }
  return BinaryDataset::FromRows({"a", "b", "c", "d", "e"}, rows, labels);
}

SweepSpec Small() {
  SweepSpec s;
  s.label = "y";
  s.mechanisms = {MechanismKind::kNonPrivate, MechanismKind::kSmoothLaplace,
                  MechanismKind::kGlobalLaplace, MechanismKind::kNoisyCounts};
  s.epsilons = {0.1, 1.0, 10.0};
  s.runs = 6;
  s.max_arity = 1;
  return s;
}

std::string Csv(const SweepResult& r) {
  std::ostringstream out;
  WriteResultsCsv(r, out);
  return out.str();
}

TEST(SweepSpecTest, ValidationRejectsBadGrids) {
  SweepSpec s = Small();
  EXPECT_NO_THROW(s.Validate());
  s.epsilons = {0.0, 1.0};
  EXPECT_THROW(s.Validate(), UsageError);
  s.epsilons = {1.0, 0.5};
  EXPECT_THROW(s.Validate(), UsageError);
  s.epsilons = {};
  EXPECT_THROW(s.Validate(), UsageError);
  s = Small();
  s.runs = 0;
  EXPECT_THROW(s.Validate(), UsageError);
}

TEST(SweepSpecTest, DefaultGridIsLogSpaced) {
  const auto g = DefaultEpsilonGrid();
  ASSERT_EQ(g.size(), 12u);
  EXPECT_NEAR(g.front(), 0.01, 1e-15);
  EXPECT_NEAR(g.back(), 100.0, 1e-12);
  for (std::size_t i = 2; i < g.size(); ++i) {
    EXPECT_NEAR(g[i] / g[i - 1], g[1] / g[0], 1e-9);
  }
}

TEST(SweepSpecTest, ParsesKeys) {
  const SweepSpec s = ParseSweepSpec(
      "data = prepared.csv\nlabel = y\nmechanisms = none, sm-cauchy\nepsilons = 0.5, 2\n"
      "runs = 4\nseed = 9\nrelease_counts = false\ndelta = 1e-5\nthreads = 2\n",
      "/tmp/base");
  EXPECT_EQ(s.data, std::filesystem::path("/tmp/base/prepared.csv"));
  EXPECT_EQ(s.mechanisms,
            (std::vector<MechanismKind>{MechanismKind::kNonPrivate, MechanismKind::kSmoothCauchy}));
  EXPECT_EQ(s.epsilons, (std::vector<double>{0.5, 2.0}));
  EXPECT_EQ(s.runs, 4);
  EXPECT_EQ(s.base_seed, 9u);
  EXPECT_FALSE(s.release_counts);
  EXPECT_EQ(s.delta, 1e-5);
  EXPECT_EQ(s.threads, 2);
  EXPECT_THROW(ParseSweepSpec("data = x\nlabel = y\nfoo = 1\n", "."), UsageError);
  EXPECT_THROW(ParseSweepSpec("data = x\nlabel = y\nepsilons = 0\n", "."), UsageError);
}

TEST(RunSweepTest, RerunIsBitIdentical) {
  const BinaryDataset d = Synthetic(400, 1);
  const SweepSpec s = Small();
  EXPECT_EQ(Csv(RunSweep(s, d)), Csv(RunSweep(s, d)));
}

TEST(RunSweepTest, ThreadCountDoesNotChangeResults) {
  const BinaryDataset d = Synthetic(400, 2);
  SweepSpec s = Small();
  s.threads = 1;
  const std::string one = Csv(RunSweep(s, d));
  s.threads = 4;
  EXPECT_EQ(Csv(RunSweep(s, d)), one);
}

TEST(RunSweepTest, RecordsAreCompleteAndAudited) {
  const BinaryDataset d = Synthetic(400, 3);
  const SweepSpec s = Small();
  const SweepResult r = RunSweep(s, d);
  ASSERT_EQ(r.records.size(), 4u * 3u * 6u);
  for (const SweepRecord& rec : r.records) {
    EXPECT_FALSE(rec.failed) << rec.error;
    EXPECT_TRUE(rec.audit_ok);
    EXPECT_GE(rec.test_accuracy, 0.0);
    EXPECT_LE(rec.test_accuracy, 1.0);
    EXPECT_GE(rec.vulnerability, 0.5);
    EXPECT_GE(rec.length, 1);
    EXPECT_LE(rec.length, s.max_length);
    EXPECT_EQ(rec.wall_ms, 0.0);
  }
  // Baseline records of one run share the model, hence the metrics.
  EXPECT_EQ(r.records[0].test_accuracy, r.records[6].test_accuracy);
}

TEST(RunSweepTest, ExtremeEpsilonMatchesBaseline) {
  const BinaryDataset d = Synthetic(500, 4);
  SweepSpec s = Small();
  s.mechanisms = {MechanismKind::kNonPrivate, MechanismKind::kGlobalLaplace,
                  MechanismKind::kExponential};
  s.epsilons = {1e9};
  s.release_counts = false;
  const SweepResult r = RunSweep(s, d);
  // Vulnerability is not compared: a pure remainder may still get a redundant
  // rule under vanishing noise, which changes the partition but not the
  // predictions.
  for (int run = 0; run < s.runs; ++run) {
    for (int m = 1; m < 3; ++m) {
      EXPECT_EQ(r.records[m * s.runs + run].test_accuracy, r.records[run].test_accuracy);
    }
  }
}

TEST(RunSweepTest, SeedsAreDistinct) {
  EXPECT_NE(SplitSeed(1, 0), SplitSeed(1, 1));
  EXPECT_NE(SplitSeed(1, 0), SplitSeed(2, 0));
  EXPECT_NE(RecordSeed(1, MechanismKind::kSmoothLaplace, 0, 0),
            RecordSeed(1, MechanismKind::kGlobalLaplace, 0, 0));
  EXPECT_NE(RecordSeed(1, MechanismKind::kSmoothLaplace, 0, 0),
            RecordSeed(1, MechanismKind::kSmoothLaplace, 1, 0));
}

TEST(AggregateTest, MeanAndSampleStd) {
  SweepResult r;
  for (int i = 0; i < 3; ++i) {
    SweepRecord rec;
    rec.mechanism = MechanismKind::kGlobalLaplace;
    rec.epsilon = 1.0;
    rec.run = i;
    rec.test_accuracy = 0.5 + 0.1 * i;
    rec.vulnerability = 0.5;
    r.records.push_back(rec);
  }
  SweepRecord bad = r.records[0];
  bad.failed = true;
  bad.test_accuracy = std::nan("");
  r.records.push_back(bad);
  const auto agg = Aggregate(r);
  ASSERT_EQ(agg.size(), 1u);
  EXPECT_EQ(agg[0].count, 3);
  EXPECT_NEAR(agg[0].mean_acc, 0.6, 1e-15);
  EXPECT_NEAR(agg[0].std_acc, 0.1, 1e-15);
  std::ostringstream out;
  WriteAggregateCsv(agg, out);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')),
            "mechanism,epsilon,mean_acc,std_acc,mean_vuln,std_vuln");
}

TEST(NoiseTableTest, SmoothBelowGlobalAndDecreasing) {
  std::vector<std::size_t> grid;
  for (double x = 1; x <= 1e5; x *= 1.5) grid.push_back(static_cast<std::size_t>(x));
  const auto rows = NoiseScaleTable(grid, 1, 1.0, 1e-6, 5);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_DOUBLE_EQ(rows[i].global_scale, 14.0);
    if (i > 0) EXPECT_LE(rows[i].smooth_scale, rows[i - 1].smooth_scale);
    if (rows[i].n >= 100) EXPECT_LT(rows[i].smooth_scale, rows[i].global_scale);
  }
  EXPECT_THROW(NoiseScaleTable({3}, 5, 1.0, 1e-6, 5), UsageError);
}

TEST(FormatDoubleTest, RoundTrips) {
  for (double v : {0.1, 1.0 / 3, 1e-300, 123456789.0}) {
    EXPECT_EQ(std::stod(FormatDouble(v)), v);
  }
}

}  // namespace
}  // namespace dprl
