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
#include "dprl/budget.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "dprl/errors.hpp"
#include "dprl/gini.hpp"

namespace dprl {

PrivacyBudget MakeBudget(double epsilon, double delta, int max_length, bool release_counts) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw UsageError("epsilon must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw UsageError("delta must lie in (0, 1)");
  if (max_length < 2) throw UsageError("max length must be at least 2");
  PrivacyBudget b;
  b.epsilon_total = epsilon;
  b.delta_total = delta;
  b.max_length = max_length;
  b.release_counts = release_counts;
  b.epsilon_node = epsilon / (release_counts ? 3.0 * max_length - 1.0 : 2.0 * max_length - 1.0);
  b.delta_node = delta / (max_length - 1.0);
  b.beta = b.epsilon_node / (2.0 * std::log(2.0 / b.delta_node));
  ValidateBeta(b.beta);
  return b;
}

std::string_view AccessKindName(AccessKind kind) {
  switch (kind) {
    case AccessKind::kSupport: return "support";
    case AccessKind::kSelection: return "selection";
    case AccessKind::kCounts: return "counts";
  }
  return "unknown";
}

AccessKind ParseAccessKind(std::string_view name) {
  if (name == "support") return AccessKind::kSupport;
  if (name == "selection") return AccessKind::kSelection;
  if (name == "counts") return AccessKind::kCounts;
  throw DataError("unknown access kind '" + std::string(name) + "'");
}

AuditReport AuditAccesses(std::span<const BudgetAccess> accesses, const PrivacyBudget& budget) {
  struct Group {
    double epsilon = 0.0;
    double delta = 0.0;
    int node = 0;
  };
  std::map<int, Group> groups;
  AuditReport report;
  for (const BudgetAccess& a : accesses) {
    if (!(a.epsilon >= 0.0) || !(a.delta >= 0.0)) {
      report.ok = false;
      report.problems.push_back("access with negative budget at node " + std::to_string(a.node));
    }
    Group& g = groups[a.group];
    g.epsilon = std::max(g.epsilon, a.epsilon);
    g.delta = std::max(g.delta, a.delta);
    g.node = a.node;  // accesses are recorded in execution order
  }
  std::map<int, int> charges;
  for (const auto& [id, g] : groups) {
    report.epsilon_spent += g.epsilon;
    report.delta_spent += g.delta;
    ++charges[g.node];
  }
  const int allowance = budget.release_counts ? 3 : 2;
  for (const auto& [node, count] : charges) {
    report.max_node_charges = std::max(report.max_node_charges, count);
    if (count > allowance) {
      report.ok = false;
      report.problems.push_back("node " + std::to_string(node) + " charged " +
                                std::to_string(count) + " accesses, allowance " +
                                std::to_string(allowance));
    }
  }
  const double slack = 1e-9;
  if (report.epsilon_spent > budget.epsilon_total * (1.0 + slack)) {
    report.ok = false;
    report.problems.push_back("epsilon spent exceeds the total budget");
  }
  if (report.delta_spent > budget.delta_total * (1.0 + slack)) {
    report.ok = false;
    report.problems.push_back("delta spent exceeds the total budget");
  }
  return report;
}

}  // namespace dprl
