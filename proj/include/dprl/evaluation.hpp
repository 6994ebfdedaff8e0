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
// Test accuracy and the distributional-overfitting vulnerability score of a
// rule list.

#ifndef DPRL_EVALUATION_HPP_
#define DPRL_EVALUATION_HPP_

#include <array>
#include <string>
#include <vector>

#include "dprl/dataset.hpp"
#include "dprl/rulelist.hpp"
#include "json.hpp"

namespace dprl {

struct VulnerabilityReport {
  std::array<double, 2> tau{};          // indexed by label
  std::array<double, 2> label_prior{};  // pooled over train and test
  double overall = 0.5;
  std::vector<std::string> warnings;
};

// tau(y) = 1/2 sum_r |P[r | y, train] - P[r | y, test]| under first-match
// capture, V = 1/2 + 1/2 sum_y P[y] tau(y). A label missing from either set
// gets tau = 0 and a warning. Throws DataError if either set is empty.
VulnerabilityReport Vulnerability(const RuleList& list, const BinaryDataset& train,
                                  const BinaryDataset& test);

double AccuracyReport(const RuleList& list, const BinaryDataset& test);

nlohmann::json ToJson(const VulnerabilityReport& report);

// {"accuracy": a, "vulnerability": {...}}
nlohmann::json EvaluationJson(const RuleList& list, const BinaryDataset& train,
                              const BinaryDataset& test);

}  // namespace dprl

#endif  // DPRL_EVALUATION_HPP_
