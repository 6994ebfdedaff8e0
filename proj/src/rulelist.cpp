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
#include "dprl/rulelist.hpp"

#include <algorithm>
#include <sstream>

#include "dprl/errors.hpp"

namespace dprl {

RuleList::RuleList(std::vector<Rule> rules) : rules_(std::move(rules)) {
  if (rules_.empty() || !rules_.back().is_default()) {
    throw InvariantError("a rule list must end with a default rule");
  }
  for (std::size_t i = 0; i + 1 < rules_.size(); ++i) {
    if (rules_[i].is_default()) {
      throw InvariantError("only the last rule of a rule list may have an empty antecedent");
    }
  }
}

RuleList RuleList::Default(bool prediction, std::optional<NoisyCounts> counts) {
  return RuleList({Rule{{}, prediction, counts}});
}

bool RuleList::SameModel(const RuleList& other) const {
  if (size() != other.size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (rules_[i].antecedent != other.rules_[i].antecedent ||
        rules_[i].prediction != other.rules_[i].prediction) {
      return false;
    }
  }
  return true;
}

CaptureResult Capture(const Rule& rule, const BinaryDataset& data, const BitVector& active) {
  CaptureResult out;
  out.captured = Coverage(rule.antecedent, data);
  out.captured &= active;
  out.remaining = active;
  out.remaining.and_not(out.captured);
  out.positives = count_and(out.captured, data.labels());
  out.negatives = out.captured.count() - out.positives;
  return out;
}

bool Predict(const RuleList& list, const std::vector<bool>& sample) {
  for (const Rule& rule : list.rules()) {
    const bool fires = std::all_of(rule.antecedent.begin(), rule.antecedent.end(),
                                   [&](const Literal& lit) {
                                     return sample.at(lit.feature_index) != lit.negated;
                                   });
    if (fires) return rule.prediction;
  }
  throw InvariantError("rule list without a default rule");
}

std::vector<BitVector> FirstMatchPartition(const RuleList& list, const BinaryDataset& data) {
  std::vector<BitVector> parts;
  parts.reserve(list.size());
  BitVector active(data.rows(), true);
  for (const Rule& rule : list.rules()) {
    CaptureResult c = Capture(rule, data, active);
    parts.push_back(std::move(c.captured));
    active = std::move(c.remaining);
  }
  return parts;
}

double Accuracy(const RuleList& list, const BinaryDataset& data) {
  if (data.empty()) throw DataError("accuracy of an empty dataset is undefined");
  const auto parts = FirstMatchPartition(list, data);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::size_t pos = count_and(parts[i], data.labels());
    correct += list.rules()[i].prediction ? pos : parts[i].count() - pos;
  }
  return static_cast<double>(correct) / static_cast<double>(data.rows());
}

std::string FormatAntecedent(const Antecedent& antecedent,
                             const std::vector<std::string>& feature_names) {
  if (antecedent.empty()) return "True";
  std::string out;
  for (std::size_t i = 0; i < antecedent.size(); ++i) {
    if (i > 0) out += " && ";
    if (antecedent[i].negated) out += "!";
    out += feature_names.at(antecedent[i].feature_index);
  }
  return out;
}

namespace {

Literal ParseLiteral(std::string name, const std::vector<std::string>& feature_names) {
  // A feature literally named "!x" wins over the negation of "x".
  const bool exact =
      std::find(feature_names.begin(), feature_names.end(), name) != feature_names.end();
  const bool negated = !exact && !name.empty() && name.front() == '!';
  if (negated) name.erase(0, 1);
  const auto it = std::find(feature_names.begin(), feature_names.end(), name);
  if (it == feature_names.end()) throw DataError("unknown feature '" + name + "'");
  return {static_cast<std::size_t>(it - feature_names.begin()), negated};
}

nlohmann::json LiteralsToJson(const Antecedent& a, const std::vector<std::string>& feature_names) {
  nlohmann::json lits = nlohmann::json::array();
  for (const Literal& lit : a) {
    lits.push_back((lit.negated ? "!" : "") + feature_names.at(lit.feature_index));
  }
  return lits;
}

}  // namespace

nlohmann::json ToJson(const RuleList& list, const std::vector<std::string>& feature_names) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Rule& rule : list.rules()) {
    nlohmann::json obj = {{"antecedent", LiteralsToJson(rule.antecedent, feature_names)}, {"prediction", rule.prediction ? 1 : 0}};
    if (rule.counts) {
      obj["noisy_c0"] = rule.counts->c0;
      obj["noisy_c1"] = rule.counts->c1;
    }
    arr.push_back(std::move(obj));
  }
  return arr;
}

nlohmann::json MinedRulesToJson(const MinedRuleSet& rules,
                                const std::vector<std::string>& feature_names) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Antecedent& a : rules.antecedents) arr.push_back(LiteralsToJson(a, feature_names));
  return {{"max_arity", rules.max_arity}, {"rules", arr}};
}

MinedRuleSet MinedRulesFromJson(const nlohmann::json& j,
                                const std::vector<std::string>& feature_names) {
  MinedRuleSet out;
  try {
    out.max_arity = j.at("max_arity").get<int>();
    for (const auto& rule : j.at("rules")) {
      Antecedent a;
      for (const auto& lit : rule) a.push_back(ParseLiteral(lit.get<std::string>(), feature_names));
      if (a.empty()) throw DataError("rule set contains an empty antecedent");
      out.antecedents.push_back(std::move(a));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed rule set JSON: ") + e.what());
  }
  if (out.antecedents.empty()) throw DataError("rule set file holds no rules");
  return out;
}

RuleList RuleListFromJson(const nlohmann::json& j, const std::vector<std::string>& feature_names) {
  if (!j.is_array()) throw DataError("rule list JSON must be an array");
  std::vector<Rule> rules;
  try {
    for (const auto& obj : j) {
      Rule rule;
      for (const auto& lit : obj.at("antecedent")) {
        rule.antecedent.push_back(ParseLiteral(lit.get<std::string>(), feature_names));
      }
      const int pred = obj.at("prediction").get<int>();
      if (pred != 0 && pred != 1) throw DataError("prediction must be 0 or 1");
      rule.prediction = pred == 1;
      if (obj.contains("noisy_c0") || obj.contains("noisy_c1")) {
        rule.counts = NoisyCounts{obj.at("noisy_c0").get<double>(), obj.at("noisy_c1").get<double>()};
      }
      rules.push_back(std::move(rule));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed rule list JSON: ") + e.what());
  }
  try {
    return RuleList(std::move(rules));
  } catch (const InvariantError& e) {
    throw DataError(e.what());
  }
}

std::string PrettyPrint(const RuleList& list, const std::vector<std::string>& feature_names,
                        const std::string& negative_label, const std::string& positive_label) {
  std::ostringstream out;
  const auto& rules = list.rules();
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const std::string& label = rules[i].prediction ? positive_label : negative_label;
    if (rules[i].is_default()) {
      out << (i == 0 ? "" : "else ") << "[" << label << "]";
    } else {
      out << (i == 0 ? "if [" : "else if [") << FormatAntecedent(rules[i].antecedent, feature_names)
          << "] then [" << label << "]";
    }
    if (rules[i].counts) {
      out << "  (c0=" << rules[i].counts->c0 << ", c1=" << rules[i].counts->c1 << ")";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace dprl
