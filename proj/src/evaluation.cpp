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
#include "dprl/evaluation.hpp"

#include <cmath>

#include "dprl/errors.hpp"

namespace dprl {
namespace {

// counts[y][r]: label-y rows classified by rule r.
std::array<std::vector<std::size_t>, 2> CaptureCounts(const RuleList& list,
                                                      const BinaryDataset& data) {
  std::array<std::vector<std::size_t>, 2> counts;
  for (const BitVector& part : FirstMatchPartition(list, data)) {
    const std::size_t pos = count_and(part, data.labels());
    counts[1].push_back(pos);
    counts[0].push_back(part.count() - pos);
  }
  return counts;
}

}  // namespace

VulnerabilityReport Vulnerability(const RuleList& list, const BinaryDataset& train,
                                  const BinaryDataset& test) {
  if (train.empty() || test.empty()) throw DataError("vulnerability needs non-empty train and test sets");
  const auto a = CaptureCounts(list, train);
  const auto b = CaptureCounts(list, test);
  const std::array<std::size_t, 2> train_label = {train.rows() - train.labels().count(),
                                                  train.labels().count()};
  const std::array<std::size_t, 2> test_label = {test.rows() - test.labels().count(),
                                                 test.labels().count()};
  const double pooled = static_cast<double>(train.rows() + test.rows());
  VulnerabilityReport report;
  double weighted = 0.0;
  for (int y = 0; y < 2; ++y) {
    report.label_prior[y] = static_cast<double>(train_label[y] + test_label[y]) / pooled;
    if (train_label[y] == 0 || test_label[y] == 0) {
      report.warnings.push_back("label " + std::to_string(y) +
                                " is missing from one of the sets; tau set to 0");
      continue;
    }
    double gap = 0.0;
    for (std::size_t r = 0; r < list.size(); ++r) {
      gap += std::abs(static_cast<double>(a[y][r]) / static_cast<double>(train_label[y]) -
                      static_cast<double>(b[y][r]) / static_cast<double>(test_label[y]));
    }
    report.tau[y] = 0.5 * gap;
    weighted += report.label_prior[y] * report.tau[y];
  }
  report.overall = 0.5 + 0.5 * weighted;
  return report;
}

double AccuracyReport(const RuleList& list, const BinaryDataset& test) {
  return Accuracy(list, test);
}

nlohmann::json ToJson(const VulnerabilityReport& report) {
  return {{"overall", report.overall},
          {"tau", {{"0", report.tau[0]}, {"1", report.tau[1]}}},
          {"label_prior", {{"0", report.label_prior[0]}, {"1", report.label_prior[1]}}},
          {"warnings", report.warnings}};
}

nlohmann::json EvaluationJson(const RuleList& list, const BinaryDataset& train,
                              const BinaryDataset& test) {
  return {{"accuracy", AccuracyReport(list, test)},
          {"train_accuracy", AccuracyReport(list, train)},
          {"rules", list.size()},
          {"vulnerability", ToJson(Vulnerability(list, train, test))}};
}

}  // namespace dprl
