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
#ifndef DPRL_RULELIST_HPP_
#define DPRL_RULELIST_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dprl/bitvector.hpp"
#include "dprl/dataset.hpp"
#include "json.hpp"

namespace dprl {

// Differentially-private label counts released with a rule.
struct NoisyCounts {
  double c0 = 0.0;
  double c1 = 0.0;

  friend bool operator==(const NoisyCounts&, const NoisyCounts&) = default;
};

struct Rule {
  Antecedent antecedent;  // empty for the default rule
  bool prediction = false;
  std::optional<NoisyCounts> counts;

  bool is_default() const { return antecedent.empty(); }
  friend bool operator==(const Rule&, const Rule&) = default;
};

// Ordered rules; the last one (and only the last one) is the default rule
// with an empty antecedent, so every sample is classified.
class RuleList {
 public:
  explicit RuleList(std::vector<Rule> rules);

  // A list holding only the default rule.
  static RuleList Default(bool prediction, std::optional<NoisyCounts> counts = std::nullopt);

  const std::vector<Rule>& rules() const { return rules_; }
  std::size_t size() const { return rules_.size(); }
  const Rule& default_rule() const { return rules_.back(); }

  // Same antecedents and predictions; released counts are ignored.
  bool SameModel(const RuleList& other) const;

  friend bool operator==(const RuleList&, const RuleList&) = default;

 private:
  std::vector<Rule> rules_;
};

struct CaptureResult {
  BitVector captured;
  BitVector remaining;
  std::size_t negatives = 0;  // label-0 rows among captured
  std::size_t positives = 0;  // label-1 rows among captured
};

CaptureResult Capture(const Rule& rule, const BinaryDataset& data, const BitVector& active);

// Consequent of the first rule whose antecedent holds on `sample`.
bool Predict(const RuleList& list, const std::vector<bool>& sample);

// For each rule, the rows it classifies under first-match semantics.
std::vector<BitVector> FirstMatchPartition(const RuleList& list, const BinaryDataset& data);

// Fraction of rows whose prediction equals the label. Throws on empty data.
double Accuracy(const RuleList& list, const BinaryDataset& data);

// JSON: [{"antecedent": ["f", "!g"], "prediction": 0|1, "noisy_c0": x, "noisy_c1": y}, ...]
nlohmann::json ToJson(const RuleList& list, const std::vector<std::string>& feature_names);
RuleList RuleListFromJson(const nlohmann::json& j, const std::vector<std::string>& feature_names);

// Mined rule set file: {"max_arity": k, "rules": [["f", "!g"], ...]}.
nlohmann::json MinedRulesToJson(const MinedRuleSet& rules,
                                const std::vector<std::string>& feature_names);
MinedRuleSet MinedRulesFromJson(const nlohmann::json& j,
                                const std::vector<std::string>& feature_names);

// if/else-if listing, one rule per line.
std::string PrettyPrint(const RuleList& list, const std::vector<std::string>& feature_names,
                        const std::string& negative_label = "0",
                        const std::string& positive_label = "1");

std::string FormatAntecedent(const Antecedent& antecedent,
                             const std::vector<std::string>& feature_names);

}  // namespace dprl

#endif  // DPRL_RULELIST_HPP_
