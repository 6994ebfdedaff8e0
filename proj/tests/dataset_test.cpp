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
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dprl/dataset.hpp"
#include "dprl/errors.hpp"
#include "gtest/gtest.h"
#include "test_util.hpp"

namespace dprl {
namespace {

TEST(LoadCsvTest, ReadsFeaturesAndLabel) {
  const auto path = testing_util::WriteTemp("load.csv", "a,y,b\n1,0,0\n0,1,1\n1,1,0\n");
  const BinaryDataset d = LoadCsv(path, "y");
  ASSERT_EQ(d.rows(), 3u);
  ASSERT_EQ(d.features(), 2u);
  EXPECT_EQ(d.feature_names(), (std::vector<std::string>{"a", "b"}));
  EXPECT_TRUE(d.feature(0, 0));
  EXPECT_FALSE(d.feature(1, 0));
  EXPECT_TRUE(d.feature(1, 1));
  EXPECT_FALSE(d.label(0));
  EXPECT_TRUE(d.label(2));
}

TEST(LoadCsvTest, NonBinaryCellNamesRowAndColumn) {
  const auto path = testing_util::WriteTemp("bad.csv", "a,b,y\n1,0,1\n0,2,1\n");
  try {
    LoadCsv(path, "y");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("'b'"), std::string::npos) << msg;
  }
}

TEST(LoadCsvTest, MissingLabelColumnIsDataError) {
  const auto path = testing_util::WriteTemp("nolabel.csv", "a,b\n1,0\n");
  EXPECT_THROW(LoadCsv(path, "y"), DataError);
}

TEST(QuantileEdgesTest, MedianSplitOfFourValues) {
  EXPECT_EQ(QuantileEdges({4, 1, 3, 2}, 2), (std::vector<double>{2}));
}

TEST(QuantileEdgesTest, DuplicateEdgesCollapse) {
  // Nearest-rank quantiles at 1/4, 2/4, 3/4 of eight values: ranks 2, 4, 6.
  EXPECT_EQ(QuantileEdges({0, 0, 0, 0, 0, 0, 1, 2}, 4), (std::vector<double>{0}));
  EXPECT_EQ(QuantileEdges({1, 2, 3, 4, 5, 6, 7, 8}, 4), (std::vector<double>{2, 4, 6}));
}

RawTable Table(std::vector<std::string> columns, std::vector<std::vector<std::string>> rows) {
  return RawTable{std::move(columns), std::move(rows)};
}

TEST(BinarizeTest, NumericColumnWithTwoBinsIsMedianIndicator) {
  const RawTable t = Table({"x", "y"}, {{"1", "0"}, {"2", "1"}, {"3", "0"}, {"4", "1"}});
  const BinaryDataset d = Binarize(t, 2, "y");
  ASSERT_EQ(d.features(), 1u);
  EXPECT_EQ(d.feature_names()[0], "x<=2");
  std::vector<bool> col;
  for (std::size_t i = 0; i < 4; ++i) col.push_back(d.feature(i, 0));
  EXPECT_EQ(col, (std::vector<bool>{true, true, false, false}));
}

TEST(BinarizeTest, CategoricalOneHotAndTwoLevelColumns) {
  BinarizeOptions o;
  o.label_column = "y";
  o.label_positive = "yes";
  const RawTable t = Table({"color", "flag", "y"}, {{"red", "A", "yes"},
                                                     {"blue", "B", "no"},
                                                     {"green", "A", "no"}});
  const BinaryDataset d = Binarize(t, o);
  EXPECT_EQ(d.feature_names(),
            (std::vector<std::string>{"color=blue", "color=green", "color=red", "flag=B"}));
  EXPECT_TRUE(d.label(0));
  EXPECT_FALSE(d.label(1));
  EXPECT_TRUE(d.feature(1, 3));
  EXPECT_TRUE(d.feature(0, 2));
}

TEST(BinarizeTest, ConstantColumnWarnsAndEmitsAllOnes) {
  const RawTable t = Table({"c", "y"}, {{"5", "0"}, {"5", "1"}, {"5", "1"}});
  BinarizeOptions o;
  o.label_column = "y";
  std::vector<std::string> warnings;
  const BinaryDataset d = Binarize(t, o, &warnings);
  ASSERT_EQ(d.features(), 1u);
  EXPECT_EQ(d.column(0).count(), 3u);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("constant"), std::string::npos);
}

TEST(BinarizeTest, DropListRemovesColumns) {
  BinarizeOptions o;
  o.label_column = "y";
  o.drop = {"race"};
  const RawTable t = Table({"race", "x", "y"}, {{"a", "1", "0"}, {"b", "2", "1"}});
  const BinaryDataset d = Binarize(t, o);
  for (const auto& name : d.feature_names()) EXPECT_EQ(name.rfind("race", 0), std::string::npos);
}

TEST(BinarizeTest, WriteThenLoadRoundTripsBitExactly) {
  const RawTable t = Table({"x", "k", "y"}, {{"1", "u", "1"},
                                             {"7", "v", "0"},
                                             {"3", "w", "1"},
                                             {"9", "u", "0"},
                                             {"2", "v", "1"}});
  const BinaryDataset d = Binarize(t, 3, "y");
  const auto path = testing_util::TempPath("roundtrip.csv");
  WriteCsv(d, path, "y");
  const BinaryDataset back = LoadCsv(path, "y");
  EXPECT_EQ(back.feature_names(), d.feature_names());
  ASSERT_EQ(back.rows(), d.rows());
  for (std::size_t j = 0; j < d.features(); ++j) EXPECT_EQ(back.column(j), d.column(j));
  EXPECT_EQ(back.labels(), d.labels());
}

BinaryDataset Sequential(std::size_t n) {
  std::vector<std::vector<std::uint8_t>> rows;
  std::vector<std::uint8_t> labels;
  for (std::size_t i = 0; i < n; ++i) {
    // Encode the row index in the features so partitions can be recovered.
    std::vector<std::uint8_t> r;
    for (int b = 0; b < 10; ++b) r.push_back((i >> b) & 1U);
    rows.push_back(r);
    labels.push_back(i % 3 == 0);
  }
  std::vector<std::string> names;
  for (int b = 0; b < 10; ++b) names.push_back("bit" + std::to_string(b));
  return BinaryDataset::FromRows(names, rows, labels);
}

std::set<std::size_t> RowIds(const BinaryDataset& d) {
  std::set<std::size_t> ids;
  for (std::size_t i = 0; i < d.rows(); ++i) {
    std::size_t id = 0;
    for (std::size_t b = 0; b < 10; ++b) id |= static_cast<std::size_t>(d.feature(i, b)) << b;
    ids.insert(id);
  }
  return ids;
}

TEST(SplitTest, SizesFollowFloor) {
  const auto [tr, te] = Split(Sequential(10), 0.7, 5);
  EXPECT_EQ(tr.rows(), 7u);
  EXPECT_EQ(te.rows(), 3u);
}

TEST(SplitTest, SameSeedSamePartition) {
  const BinaryDataset d = Sequential(100);
  EXPECT_EQ(RowIds(Split(d, 0.7, 9).first), RowIds(Split(d, 0.7, 9).first));
}

TEST(SplitTest, DifferentSeedsGiveDifferentPartitions) {
  const BinaryDataset d = Sequential(100);
  for (std::uint64_t s = 1; s <= 10; ++s) {
    EXPECT_NE(RowIds(Split(d, 0.7, s).first), RowIds(Split(d, 0.7, s + 100).first)) << s;
  }
}

TEST(SplitTest, PartsAreDisjointAndCoverEveryRow) {
  const BinaryDataset d = Sequential(257);
  for (std::uint64_t s = 0; s < 25; ++s) {
    const auto [tr, te] = Split(d, 0.7, s);
    const auto a = RowIds(tr);
    const auto b = RowIds(te);
    EXPECT_EQ(a.size(), tr.rows());
    EXPECT_EQ(b.size(), te.rows());
    std::set<std::size_t> all(a);
    all.insert(b.begin(), b.end());
    EXPECT_EQ(all.size(), 257u);
  }
}

TEST(SplitTest, RejectsDegenerateFractions) {
  EXPECT_THROW(Split(Sequential(10), 0.0, 1), UsageError);
  EXPECT_THROW(Split(Sequential(10), 0.05, 1), UsageError);
}

BinaryDataset Random(std::size_t n, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::uint8_t>> rows(n, std::vector<std::uint8_t>(m));
  std::vector<std::uint8_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : rows[i]) v = rng() & 1U;
    labels[i] = rng() & 1U;
  }
  std::vector<std::string> names;
  for (std::size_t j = 0; j < m; ++j) names.push_back("f" + std::to_string(j));
  return BinaryDataset::FromRows(names, rows, labels);
}

TEST(MineRulesTest, SingleLiteralsOfTwoFeatures) {
  const MinedRuleSet r = MineRules(Random(20, 2, 1), 1, 0.0);
  ASSERT_EQ(r.size(), 4u);
  EXPECT_EQ(r.antecedents[0], (Antecedent{{0, false}}));
  EXPECT_EQ(r.antecedents[1], (Antecedent{{0, true}}));
  EXPECT_EQ(r.antecedents[2], (Antecedent{{1, false}}));
  EXPECT_EQ(r.antecedents[3], (Antecedent{{1, true}}));
}

TEST(MineRulesTest, PairCountMatchesBruteForce) {
  // Independent count: 2m literals plus 4 sign patterns per unordered feature pair.
  for (std::size_t m : {2u, 3u, 5u}) {
    const MinedRuleSet r = MineRules(Random(30, m, m), 2, 0.0);
    EXPECT_EQ(r.size(), 2 * m + 4 * m * (m - 1) / 2) << m;
  }
  EXPECT_EQ(MineRules(Random(30, 3, 3), 2, 0.0).size(), 18u);
}

TEST(MineRulesTest, NoContradictoryPairsAndSortedOrder) {
  const MinedRuleSet r = MineRules(Random(50, 6, 2), 2, 0.0);
  for (const Antecedent& a : r.antecedents) {
    if (a.size() == 2) EXPECT_NE(a[0].feature_index, a[1].feature_index);
  }
  EXPECT_TRUE(std::is_sorted(r.antecedents.begin(), r.antecedents.end()));
}

TEST(MineRulesTest, ZeroSupportLiteralExcluded) {
  BinaryDataset d = BinaryDataset::FromRows({"a", "b"}, {{0, 1}, {0, 0}, {0, 1}}, {1, 0, 1});
  const MinedRuleSet r = MineRules(d, 1, 0.01);
  for (const Antecedent& a : r.antecedents) EXPECT_NE(a, (Antecedent{{0, false}}));
  EXPECT_EQ(r.size(), 3u);
}

TEST(MineRulesTest, SupportFilterMatchesDirectCounts) {
  const BinaryDataset d = Random(200, 5, 11);
  const MinedRuleSet r = MineRules(d, 2, 0.3);
  for (const Antecedent& a : r.antecedents) {
    EXPECT_GE(Coverage(a, d).count(), 60u);
  }
  EXPECT_LT(r.size(), MineRules(d, 2, 0.0).size());
}

TEST(MineRulesTest, EmptyResultIsDataError) {
  EXPECT_THROW(MineRules(Random(10, 2, 1), 2, 1.0), DataError);
}

TEST(RecipeTest, ParsesEveryKey) {
  const Recipe r = ParseRecipe(
      "# comment\nlabel_column = y\nlabel_positive = yes\nnumeric_bins = 5\n"
      "drop = a, b\ncategorical = c\nmax_arity = 1\nmin_support = 0.1\nlambda = 0.12\n"
      "max_length = 4\nconfidence = 0.95\n");
  EXPECT_EQ(r.binarize.label_column, "y");
  EXPECT_EQ(r.binarize.label_positive, "yes");
  EXPECT_EQ(r.binarize.numeric_bins, 5);
  EXPECT_EQ(r.binarize.drop, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(r.binarize.categorical, (std::vector<std::string>{"c"}));
  EXPECT_EQ(r.max_arity, 1);
  EXPECT_DOUBLE_EQ(r.min_support, 0.1);
  EXPECT_DOUBLE_EQ(r.lambda, 0.12);
  EXPECT_EQ(r.max_length, 4);
  EXPECT_DOUBLE_EQ(r.confidence, 0.95);
}

TEST(RecipeTest, UnknownKeyIsUsageError) {
  EXPECT_THROW(ParseRecipe("label_column = y\nbins = 3\n"), UsageError);
  EXPECT_THROW(ParseRecipe("numeric_bins = 3\n"), UsageError);
}

// Public datasets, when scripts/fetch_datasets.py has been run.
TEST(PublicDataTest, PreparedRowCounts) {
  const auto dir = testing_util::DataDir();
  struct Case {
    const char* name;
    std::size_t rows;
  };
  int found = 0;
  for (const Case c : {Case{"adult", 48842}, Case{"german", 1000}, Case{"compas", 6172}}) {
    const auto raw = dir / "raw" / (std::string(c.name) + ".csv");
    const auto recipe = testing_util::SourceDir() / "recipes" / (std::string(c.name) + ".cfg");
    if (!std::filesystem::exists(raw)) continue;
    ++found;
    const Recipe r = LoadRecipe(recipe);
    const BinaryDataset d = Binarize(ReadRawCsv(raw), r.binarize);
    EXPECT_EQ(d.rows(), c.rows) << c.name;
    if (std::string(c.name) == "compas") {
      EXPECT_EQ(MineRules(d, r.max_arity, r.min_support).size(), 18u);
    }
  }
  if (found == 0) GTEST_SKIP() << "datasets not fetched";
}

}  // namespace
}  // namespace dprl
