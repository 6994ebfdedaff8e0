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
// Greedy rule-list learners: the exact baseline and the differentially
// private variant with a pluggable selection mechanism.
//
// max_length K counts the default rule: both learners add at most K - 1 rules
// before closing the list with the default.

#ifndef DPRL_LEARNER_HPP_
#define DPRL_LEARNER_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "dprl/budget.hpp"
#include "dprl/dataset.hpp"
#include "dprl/mechanisms.hpp"
#include "dprl/rulelist.hpp"
#include "json.hpp"

namespace dprl {

struct LearnerConfig {
  int max_length = 5;
  double min_support = 0.05;  // lambda, a fraction of the training rows
  double confidence = 0.99;
  MechanismKind mechanism = MechanismKind::kSmoothLaplace;
  std::optional<PrivacyBudget> budget;  // required unless mechanism is kNonPrivate
  double gamma = 2.0;                   // Cauchy tail exponent
  std::uint64_t seed = 0;
  // Test hook: every noise draw is replaced by 0.
  bool zero_noise = false;
};

enum class StopReason { kMaxLength, kSupport, kNoImprovement };

std::string_view StopReasonName(StopReason reason);
StopReason ParseStopReason(std::string_view name);  // throws DataError

// Accesses belonging to the default rule use this node id.
inline constexpr int kDefaultNode = -1;

struct NodeRecord {
  int node = 0;
  double noisy_support = 0.0;
  double threshold = 0.0;     // Lambda + T
  double noise_scale = 0.0;   // scale of the selection noise
  double gini_bound = 0.0;    // noisy impurity of the unsplit remainder
  double noisy_gini = 0.0;    // best noisy score, when a rule was chosen
  std::optional<std::size_t> chosen;  // index into the mined rule set
};

struct TrainTrace {
  MechanismKind mechanism = MechanismKind::kSmoothLaplace;
  PrivacyBudget budget;
  std::uint64_t seed = 0;
  std::size_t lambda_abs = 0;
  int confidence_threshold = 0;
  std::vector<NodeRecord> nodes;
  std::vector<BudgetAccess> accesses;
  StopReason stop = StopReason::kMaxLength;
};

struct TrainResult {
  RuleList model;
  TrainTrace trace;
};

// T = floor(-(ln 2 + ln(1 - C)) / eps_node) + 1.
int ConfidenceThreshold(double confidence, double eps_node);

struct PredDpResult {
  bool prediction = true;
  double c0 = 0.0;
  double c1 = 0.0;
};

// Noisy label counts with Lap(1 / eps_node) each; predicts 0 only when c0 > c1.
PredDpResult PredDp(std::size_t negatives, std::size_t positives, double eps_node,
                    NoiseSource& source);

// Exact greedy baseline. config.budget and config.mechanism are ignored.
RuleList GreedyRl(const BinaryDataset& train, const MinedRuleSet& rules,
                  const LearnerConfig& config, StopReason* stop = nullptr);

// Private greedy learner. config.mechanism picks the selection step.
TrainResult DpGreedyRl(const BinaryDataset& train, const MinedRuleSet& rules,
                       const LearnerConfig& config);

// Dispatches to GreedyRl (with an empty trace) or DpGreedyRl.
TrainResult Train(const BinaryDataset& train, const MinedRuleSet& rules,
                  const LearnerConfig& config);

nlohmann::json TraceToJson(const TrainTrace& trace);
TrainTrace TraceFromJson(const nlohmann::json& j);  // throws DataError

// Re-derives the budget from the recorded totals and audits the accesses.
AuditReport AuditTrace(const TrainTrace& trace);

}  // namespace dprl

#endif  // DPRL_LEARNER_HPP_
