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
#include <random>
#include <string>
#include <vector>

#include "dprl/dataset.hpp"
#include "dprl/errors.hpp"
#include "dprl/rulelist.hpp"
#include "gtest/gtest.h"
#include "nlohmann/json.hpp"

namespace dprl {
namespace {

// Two features (a, b), four rows covering every combination.
BinaryDataset Grid() {
  return BinaryDataset::FromRows({"a", "b"}, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {0, 1, 1, 1});
}

Rule R(Antecedent a, bool pred) { return Rule{std::move(a), pred, std::nullopt}; }

TEST(CaptureTest, ConjunctionOfLiterals) {
  const BinaryDataset d = Grid();
  const BitVector all(4, true);
  const CaptureResult r = Capture(R({{0, false}, {1, true}}, 1), d, all);
  EXPECT_EQ(r.captured.indices(), (std::vector<std::size_t>{2}));
  EXPECT_EQ(r.remaining.indices(), (std::vector<std::size_t>{0, 1, 3}));
  EXPECT_EQ(r.positives, 1u);
  EXPECT_EQ(r.negatives, 0u);
}

TEST(CaptureTest, RespectsActiveMask) {
  const BinaryDataset d = Grid();
  BitVector active(4);
  active.set(0);
  active.set(1);
  const CaptureResult r = Capture(R({{0, true}}, 0), d, active);
  EXPECT_EQ(r.captured.indices(), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(r.remaining.count(), 0u);
  EXPECT_EQ(r.negatives, 1u);
  EXPECT_EQ(r.positives, 1u);
}

TEST(CaptureTest, DefaultRuleCapturesEverythingActive) {
  const BinaryDataset d = Grid();
  const CaptureResult r = Capture(R({}, 1), d, BitVector(4, true));
  EXPECT_EQ(r.captured.count(), 4u);
  EXPECT_EQ(r.remaining.count(), 0u);
}

TEST(PredictTest, FirstMatchWins) {
  const RuleList list({R({{0, false}}, 0), R({{1, false}}, 1), R({}, 0)});
  EXPECT_FALSE(Predict(list, {true, true}));
  EXPECT_TRUE(Predict(list, {false, true}));
  EXPECT_FALSE(Predict(list, {false, false}));
}

TEST(AccuracyTest, HandComputed) {
  // Predicts b; the labels are a OR b, so only row (1, 0) is wrong.
  const RuleList list({R({{1, false}}, 1), R({}, 0)});
  EXPECT_DOUBLE_EQ(Accuracy(list, Grid()), 0.75);
}

TEST(AccuracyTest, EmptyDataThrows) {
  EXPECT_THROW(Accuracy(RuleList::Default(false), BinaryDataset()), DataError);
}

TEST(RuleListTest, DefaultMustBeLastAndUnique) {
  EXPECT_THROW(RuleList({R({{0, false}}, 1)}), InvariantError);
  EXPECT_THROW(RuleList({R({}, 1), R({}, 0)}), InvariantError);
  EXPECT_THROW(RuleList(std::vector<Rule>{}), InvariantError);
  EXPECT_NO_THROW(RuleList({R({{0, false}}, 1), R({}, 0)}));
}

TEST(RuleListTest, SameModelIgnoresCounts) {
  const RuleList a({R({{0, false}}, 1), Rule{{}, false, NoisyCounts{3.5, 1.0}}});
  const RuleList b({R({{0, false}}, 1), R({}, 0)});
  EXPECT_TRUE(a.SameModel(b));
  EXPECT_FALSE(a == b);
  EXPECT_FALSE(a.SameModel(RuleList({R({{0, false}}, 0), R({}, 0)})));
}

BinaryDataset RandomData(std::size_t n, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::uint8_t>> rows(n, std::vector<std::uint8_t>(m));
  std::vector<std::uint8_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : rows[i]) v = rng() % 3 == 0;
    labels[i] = rng() & 1U;
  }
  std::vector<std::string> names;
  for (std::size_t j = 0; j < m; ++j) names.push_back("f" + std::to_string(j));
  return BinaryDataset::FromRows(names, rows, labels);
}

RuleList RandomList(std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Rule> rules;
  const std::size_t len = 1 + rng() % 4;
  for (std::size_t k = 0; k < len; ++k) {
    Antecedent a{{static_cast<std::size_t>(rng() % m), static_cast<bool>(rng() & 1U)}};
    if (rng() & 1U) {
      const std::size_t g = (a[0].feature_index + 1 + rng() % (m - 1)) % m;
      a.push_back({g, static_cast<bool>(rng() & 1U)});
    }
    rules.push_back(R(a, rng() & 1U));
  }
  rules.push_back(R({}, rng() & 1U));
  return RuleList(std::move(rules));
}

TEST(PartitionTest, FirstMatchPartitionIsDisjointCoverAgreeingWithPredict) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const BinaryDataset d = RandomData(97, 6, s);
    const RuleList list = RandomList(6, s + 1000);
    const auto parts = FirstMatchPartition(list, d);
    ASSERT_EQ(parts.size(), list.size());
    std::size_t correct = 0;
    for (std::size_t i = 0; i < d.rows(); ++i) {
      int owners = 0;
      bool pred = false;
      for (std::size_t k = 0; k < parts.size(); ++k) {
        if (parts[k].test(i)) {
          ++owners;
          pred = list.rules()[k].prediction;
        }
      }
      ASSERT_EQ(owners, 1) << "row " << i;
      EXPECT_EQ(pred, Predict(list, d.sample(i)));
      correct += pred == d.label(i);
    }
    EXPECT_DOUBLE_EQ(Accuracy(list, d), static_cast<double>(correct) / d.rows());
  }
}

TEST(RuleListJsonTest, RoundTripPreservesRulesAndCounts) {
  const std::vector<std::string> names{"a", "b"};
  const RuleList list({Rule{{{0, false}, {1, true}}, true, NoisyCounts{0.25, 7.5}},
                       R({{1, false}}, 0), Rule{{}, true, NoisyCounts{1.0, 2.0}}});
  const nlohmann::json j = ToJson(list, names);
  EXPECT_EQ(j[0]["antecedent"], nlohmann::json({"a", "!b"}));
  EXPECT_EQ(RuleListFromJson(nlohmann::json::parse(j.dump()), names), list);
}

TEST(RuleListJsonTest, UnknownFeatureIsDataError) {
  const auto j = nlohmann::json::parse(R"([{"antecedent": ["zz"], "prediction": 1},
                                           {"antecedent": [], "prediction": 0}])");
  EXPECT_THROW(RuleListFromJson(j, {"a"}), DataError);
}

TEST(MinedRulesJsonTest, RoundTrip) {
  const std::vector<std::string> names{"x", "y", "z"};
  MinedRuleSet rules;
  rules.max_arity = 2;
  rules.antecedents = {{{0, false}}, {{0, false}, {2, true}}, {{1, true}}};
  const MinedRuleSet back = MinedRulesFromJson(MinedRulesToJson(rules, names), names);
  EXPECT_EQ(back.antecedents, rules.antecedents);
  EXPECT_EQ(back.max_arity, 2);
}

TEST(PrettyPrintTest, ListsEveryRule) {
  const RuleList list({R({{0, false}, {1, true}}, 1), R({}, 0)});
  const std::string text = PrettyPrint(list, {"a", "b"});
  EXPECT_NE(text.find("a"), std::string::npos);
  EXPECT_NE(text.find("b"), std::string::npos);
  EXPECT_EQ(FormatAntecedent({{0, false}, {1, true}}, {"a", "b"}).find("a"), 0u);
}

}  // namespace
}  // namespace dprl
