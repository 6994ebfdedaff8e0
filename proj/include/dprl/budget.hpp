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
// Per-node privacy budget and the access accounting used to audit training
// traces.
//
// A trained list has at most K - 1 learned rules followed by the default rule.
// Each learned rule costs up to three eps_node accesses (support check,
// noisy-min selection, noisy counts of the winner) and the default rule one
// (its noisy counts), so 3(K - 1) + 1 <= 3K - 1 accesses in total. When the
// counts are not released, the counts of rule j and the support check at rule
// j + 1 touch disjoint rows and compose in parallel, leaving 2K - 1.

#ifndef DPRL_BUDGET_HPP_
#define DPRL_BUDGET_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dprl {

struct PrivacyBudget {
  double epsilon_total = 0.0;
  double delta_total = 0.0;
  int max_length = 0;  // K, counting the default rule
  bool release_counts = true;
  double epsilon_node = 0.0;
  double delta_node = 0.0;
  double beta = 0.0;
};

// Throws UsageError unless eps > 0, 0 < delta < 1 and K >= 2, or when beta
// lands on a degenerate value.
PrivacyBudget MakeBudget(double epsilon, double delta, int max_length, bool release_counts);

enum class AccessKind { kSupport, kSelection, kCounts };

std::string_view AccessKindName(AccessKind kind);
AccessKind ParseAccessKind(std::string_view name);  // throws DataError

// One budgeted query against the private data. Accesses that share a group
// read disjoint rows and are charged once, at the largest epsilon in the
// group, to the node of the group's last access.
struct BudgetAccess {
  int node = 0;  // 0-based position in the rule list; the default rule is last
  AccessKind kind = AccessKind::kSupport;
  double epsilon = 0.0;
  double delta = 0.0;
  int group = 0;
};

struct AuditReport {
  bool ok = true;
  double epsilon_spent = 0.0;
  double delta_spent = 0.0;
  int max_node_charges = 0;
  std::vector<std::string> problems;
};

// Checks total epsilon and delta against the budget (with relative slack
// 1e-9 for rounding) and that no node is charged more than 3 accesses, or 2
// when counts are not released.
AuditReport AuditAccesses(std::span<const BudgetAccess> accesses, const PrivacyBudget& budget);

}  // namespace dprl

#endif  // DPRL_BUDGET_HPP_
