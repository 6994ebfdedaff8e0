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
#include "dprl/learner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dprl/errors.hpp"
#include "dprl/gini.hpp"

namespace dprl {
namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Mined rules with their coverage over the full training set, plus the
// complement pairing used to share noise between l and !l.
class Candidates {
 public:
  Candidates(const BinaryDataset& train, const MinedRuleSet& rules)
      : rules_(rules), alive_(rules.size(), true), twin_(rules.size(), kNone) {
    if (rules.size() == 0) throw DataError("the mined rule set is empty");
    coverage_.reserve(rules.size());
    std::vector<std::size_t> positive_single(train.features(), kNone);
    for (std::size_t i = 0; i < rules.size(); ++i) {
      const Antecedent& a = rules.antecedents[i];
      if (a.empty()) throw DataError("mined rule with an empty antecedent");
      for (const Literal& lit : a) {
        if (lit.feature_index >= train.features()) {
          throw DataError("rule references feature " + std::to_string(lit.feature_index) +
                          " but the data has " + std::to_string(train.features()));
        }
      }
      coverage_.push_back(Coverage(a, train));
      if (a.size() == 1 && !a[0].negated) positive_single[a[0].feature_index] = i;
    }
    for (std::size_t i = 0; i < rules.size(); ++i) {
      const Antecedent& a = rules.antecedents[i];
      if (a.size() == 1 && a[0].negated) {
        const std::size_t p = positive_single[a[0].feature_index];
        if (p != kNone && p < i) twin_[i] = p;
      }
    }
  }

  std::size_t size() const { return rules_.size(); }
  bool alive(std::size_t i) const { return alive_[i]; }
  void Remove(std::size_t i) { alive_[i] = false; }
  const BitVector& coverage(std::size_t i) const { return coverage_[i]; }
  const Antecedent& antecedent(std::size_t i) const { return rules_.antecedents[i]; }

  // Index of the still-available complement literal preceding i, or kNone.
  std::size_t LiveTwin(std::size_t i) const {
    const std::size_t t = twin_[i];
    return t != kNone && alive_[t] ? t : kNone;
  }

 private:
  const MinedRuleSet& rules_;
  std::vector<BitVector> coverage_;
  std::vector<bool> alive_;
  std::vector<std::size_t> twin_;
};

struct SplitCounts {
  std::size_t captured = 0;
  std::size_t captured_positive = 0;
};

struct Remainder {
  const BinaryDataset& data;
  BitVector active;
  std::size_t n = 0;
  std::size_t positives = 0;

  explicit Remainder(const BinaryDataset& d) : data(d), active(d.rows(), true) { Refresh(); }

  void Refresh() {
    n = active.count();
    positives = count_and(active, data.labels());
  }
  void Remove(const BitVector& covered) {
    active.and_not(covered);
    Refresh();
  }
  SplitCounts Split(const BitVector& covered) const {
    return {count_and(covered, active), count_and(covered, active, data.labels())};
  }
  double Gini(const SplitCounts& s) const {
    if (n == 0) return 0.0;
    return GiniReduction({s.captured, n - s.captured, s.captured_positive,
                          positives - s.captured_positive});
  }
  double Unsplit() const { return GiniImpurity(n, positives); }
};

std::size_t AbsoluteSupport(std::size_t n, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw UsageError("min support must lie in (0, 1)");
  const auto abs = static_cast<std::size_t>(std::floor(static_cast<double>(n) * lambda));
  if (abs < 1) {
    throw UsageError("min support " + std::to_string(lambda) + " times " + std::to_string(n) +
                     " training rows is below one sample");
  }
  return abs;
}

void ValidateCommon(const BinaryDataset& train, const LearnerConfig& config) {
  if (train.empty()) throw DataError("training set is empty");
  if (config.max_length < 1) throw UsageError("max length must be at least 1");
  if (!(config.confidence > 0.0 && config.confidence < 1.0)) {
    throw UsageError("confidence must lie in (0, 1)");
  }
}

Rule MakeRule(const Antecedent& a, const PredDpResult& p, bool release) {
  Rule r{a, p.prediction, std::nullopt};
  if (release) r.counts = NoisyCounts{p.c0, p.c1};
  return r;
}

// Records accesses in execution order and applies the parallel grouping: when
// counts are not released, the access right after a noisy-counts access reads
// rows disjoint from it and joins its group.
class Ledger {
 public:
  Ledger(std::vector<BudgetAccess>* out, bool release) : out_(out), release_(release) {}

  void Add(int node, AccessKind kind, double eps, double delta) {
    int group = next_group_;
    if (!release_ && !out_->empty() && out_->back().kind == AccessKind::kCounts &&
        !joined_last_) {
      group = out_->back().group;
      joined_last_ = true;
    } else {
      ++next_group_;
      joined_last_ = false;
    }
    out_->push_back({node, kind, eps, delta, group});
  }

 private:
  std::vector<BudgetAccess>* out_;
  bool release_;
  int next_group_ = 0;
  bool joined_last_ = false;
};

}  // namespace

std::string_view StopReasonName(StopReason reason) {
  switch (reason) {
    case StopReason::kMaxLength: return "MAX_LENGTH";
    case StopReason::kSupport: return "SUPPORT";
    case StopReason::kNoImprovement: return "NO_IMPROVEMENT";
  }
  return "UNKNOWN";
}

StopReason ParseStopReason(std::string_view name) {
  for (StopReason r : {StopReason::kMaxLength, StopReason::kSupport, StopReason::kNoImprovement}) {
    if (StopReasonName(r) == name) return r;
  }
  throw DataError("unknown stop reason '" + std::string(name) + "'");
}

int ConfidenceThreshold(double confidence, double eps_node) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw UsageError("confidence must lie in (0, 1)");
  if (!(eps_node > 0.0) || !std::isfinite(eps_node)) throw UsageError("eps_node must be positive");
  // ln 2 + ln(1 - C) folded into one log so that C = 0.5 gives exactly 0.
  const double t = std::floor(-std::log(2.0 * (1.0 - confidence)) / eps_node) + 1.0;
  if (t > static_cast<double>(std::numeric_limits<int>::max())) {
    throw UsageError("confidence threshold overflows; raise epsilon or lower the confidence");
  }
  // Below C = 1/2 the formula goes non-positive; one sample of margin is the floor.
  return std::max(1, static_cast<int>(t));
}

PredDpResult PredDp(std::size_t negatives, std::size_t positives, double eps_node,
                    NoiseSource& source) {
  PredDpResult r;
  r.c0 = LaplaceGlobal(static_cast<double>(negatives), 1.0, eps_node, source);
  r.c1 = LaplaceGlobal(static_cast<double>(positives), 1.0, eps_node, source);
  r.prediction = !(r.c0 > r.c1);
  return r;
}

RuleList GreedyRl(const BinaryDataset& train, const MinedRuleSet& rules,
                  const LearnerConfig& config, StopReason* stop) {
  ValidateCommon(train, config);
  Candidates cands(train, rules);
  const std::size_t lambda_abs = AbsoluteSupport(train.rows(), config.min_support);
  Remainder rem(train);
  std::vector<Rule> out;
  StopReason reason = StopReason::kMaxLength;
  while (static_cast<int>(out.size()) + 1 < config.max_length) {
    if (rem.n < lambda_abs) {
      reason = StopReason::kSupport;
      break;
    }
    double best = rem.Unsplit();
    std::size_t winner = kNone;
    SplitCounts winner_counts;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (!cands.alive(i)) continue;
      const SplitCounts s = rem.Split(cands.coverage(i));
      const double g = rem.Gini(s);
      if (g < best) {
        best = g;
        winner = i;
        winner_counts = s;
      }
    }
    if (winner == kNone) {
      reason = StopReason::kNoImprovement;
      break;
    }
    const std::size_t neg = winner_counts.captured - winner_counts.captured_positive;
    out.push_back({cands.antecedent(winner), !(neg > winner_counts.captured_positive), {}});
    rem.Remove(cands.coverage(winner));
    cands.Remove(winner);
  }
  const std::size_t neg = rem.n - rem.positives;
  out.push_back({{}, !(neg > rem.positives), {}});
  if (stop != nullptr) *stop = reason;
  return RuleList(std::move(out));
}

TrainResult DpGreedyRl(const BinaryDataset& train, const MinedRuleSet& rules,
                       const LearnerConfig& config) {
  ValidateCommon(train, config);
  if (config.mechanism == MechanismKind::kNonPrivate) {
    throw UsageError("the private learner needs a private mechanism");
  }
  if (!config.budget) throw UsageError("a privacy budget is required");
  const PrivacyBudget& budget = *config.budget;
  if (budget.max_length != config.max_length) {
    throw UsageError("budget was built for max length " + std::to_string(budget.max_length) +
                     " but the learner uses " + std::to_string(config.max_length));
  }
  const MechanismKind mech = config.mechanism;
  const double eps = budget.epsilon_node;
  if (mech == MechanismKind::kSmoothCauchy) {
    if (!(config.gamma > 1.0)) throw UsageError("Cauchy gamma must exceed 1");
    const double bound = eps / (2.0 * (config.gamma + 1.0));
    if (budget.beta > bound * (1.0 + 1e-12)) {
      throw UsageError("beta " + std::to_string(budget.beta) + " exceeds eps_node/(2(gamma+1)) = " +
                       std::to_string(bound) + " required by the Cauchy mechanism");
    }
  }

  Candidates cands(train, rules);
  const std::size_t lambda_abs = AbsoluteSupport(train.rows(), config.min_support);
  const bool smooth = UsesSmoothSensitivity(mech);
  const int threshold = smooth ? ConfidenceThreshold(config.confidence, eps) : 0;
  const bool release = budget.release_counts;

  NoiseSource source(config.seed);
  TrainTrace trace;
  trace.mechanism = mech;
  trace.budget = budget;
  trace.seed = config.seed;
  trace.lambda_abs = lambda_abs;
  trace.confidence_threshold = threshold;
  Ledger ledger(&trace.accesses, release);

  const double selection_delta =
      mech == MechanismKind::kSmoothLaplace || mech == MechanismKind::kGlobalGaussian
          ? budget.delta_node
          : 0.0;
  auto laplace = [&](double b) { return config.zero_noise ? 0.0 : SampleLaplace(source, b); };
  auto pred_dp = [&](std::size_t neg, std::size_t pos) {
    if (config.zero_noise) {
      return PredDpResult{!(neg > pos), static_cast<double>(neg), static_cast<double>(pos)};
    }
    return PredDp(neg, pos, eps, source);
  };

  Remainder rem(train);
  std::vector<Rule> out;
  trace.stop = StopReason::kMaxLength;
  while (static_cast<int>(out.size()) + 1 < config.max_length) {
    const int node = static_cast<int>(out.size());
    NodeRecord rec;
    rec.node = node;
    rec.threshold = static_cast<double>(lambda_abs) + threshold;
    rec.noisy_support = static_cast<double>(rem.n) + laplace(1.0 / eps);
    ledger.Add(node, AccessKind::kSupport, eps, 0.0);
    if (rec.noisy_support < rec.threshold) {
      trace.nodes.push_back(rec);
      trace.stop = StopReason::kSupport;
      break;
    }

    std::size_t winner = kNone;
    if (mech == MechanismKind::kExponential) {
      // Option 0 is "add no rule"; a negated literal whose complement is
      // still available has the same utility and is left out.
      std::vector<double> utilities{-rem.Unsplit()};
      std::vector<std::size_t> index{kNone};
      for (std::size_t i = 0; i < cands.size(); ++i) {
        if (!cands.alive(i) || cands.LiveTwin(i) != kNone) continue;
        utilities.push_back(-rem.Gini(rem.Split(cands.coverage(i))));
        index.push_back(i);
      }
      std::size_t pick = 0;
      if (config.zero_noise) {
        pick = static_cast<std::size_t>(std::max_element(utilities.begin(), utilities.end()) -
                                        utilities.begin());
      } else {
        pick = ExponentialMechanism(utilities, 0.5, eps, source);
      }
      winner = index[pick];
      rec.noise_scale = 0.0;
      rec.gini_bound = -utilities[0];
      rec.noisy_gini = -utilities[pick];
    } else if (mech == MechanismKind::kNoisyCounts) {
      const double scale = 2.0 * static_cast<double>(cands.size()) / eps;
      rec.noise_scale = scale;
      struct Noisy {
        double cn, cp, ln, lp;
      };
      std::vector<Noisy> noisy(cands.size());
      double best = std::numeric_limits<double>::infinity();
      double best_unsplit = 0.0;
      for (std::size_t i = 0; i < cands.size(); ++i) {
        if (!cands.alive(i)) continue;
        const std::size_t twin = cands.LiveTwin(i);
        if (twin != kNone) {
          const Noisy& t = noisy[twin];
          noisy[i] = {t.ln, t.lp, t.cn, t.cp};
        } else {
          const SplitCounts s = rem.Split(cands.coverage(i));
          const double cp = static_cast<double>(s.captured_positive);
          const double cn = static_cast<double>(s.captured) - cp;
          const double lp = static_cast<double>(rem.positives) - cp;
          const double ln = static_cast<double>(rem.n - s.captured) - lp;
          auto noised = [&](double v) { return std::max(0.0, v + laplace(scale)); };
          const double a = noised(cn);
          const double b = noised(cp);
          const double c = noised(ln);
          const double d = noised(lp);
          noisy[i] = {a, b, c, d};
        }
        const Noisy& x = noisy[i];
        const double g = GiniFromCounts(x.cn, x.cp, x.ln, x.lp);
        if (g < best) {
          best = g;
          winner = i;
          best_unsplit = GiniFromCounts(0.0, 0.0, x.cn + x.ln, x.cp + x.lp);
        }
      }
      rec.noisy_gini = best;
      rec.gini_bound = best_unsplit;
      if (winner != kNone && !(best < best_unsplit)) winner = kNone;
    } else {
      double scale = 0.0;
      if (smooth) {
        const SensitivityContext ctx{std::max(rem.n, lambda_abs), lambda_abs, budget.beta};
        const double s_star = SmoothSensitivity(ctx);
        scale = mech == MechanismKind::kSmoothLaplace ? 2.0 * s_star / eps
                                                      : 2.0 * (config.gamma + 1.0) * s_star / eps;
      } else if (mech == MechanismKind::kGlobalLaplace) {
        scale = 0.5 / eps;
      } else {
        scale = GaussianSigma(0.5, eps, budget.delta_node);
      }
      rec.noise_scale = scale;
      auto draw = [&]() -> double {
        if (config.zero_noise) return 0.0;
        switch (mech) {
          case MechanismKind::kSmoothLaplace:
          case MechanismKind::kGlobalLaplace:
            return scale * SampleLaplace(source, 1.0);
          case MechanismKind::kSmoothCauchy:
            return scale * SampleCauchy(source, config.gamma);
          default:
            return SampleGaussian(source, scale);
        }
      };
      double best = rem.Unsplit() + draw();
      rec.gini_bound = best;
      std::vector<double> drawn(cands.size(), 0.0);
      for (std::size_t i = 0; i < cands.size(); ++i) {
        if (!cands.alive(i)) continue;
        const std::size_t twin = cands.LiveTwin(i);
        drawn[i] = twin != kNone ? drawn[twin] : draw();
        const double g = rem.Gini(rem.Split(cands.coverage(i))) + drawn[i];
        if (g < best) {
          best = g;
          winner = i;
        }
      }
      rec.noisy_gini = best;
    }
    ledger.Add(node, AccessKind::kSelection, eps, selection_delta);
    if (winner == kNone) {
      trace.nodes.push_back(rec);
      trace.stop = StopReason::kNoImprovement;
      break;
    }

    const SplitCounts s = rem.Split(cands.coverage(winner));
    const PredDpResult p = pred_dp(s.captured - s.captured_positive, s.captured_positive);
    ledger.Add(node, AccessKind::kCounts, eps, 0.0);
    rec.chosen = winner;
    trace.nodes.push_back(rec);
    out.push_back(MakeRule(cands.antecedent(winner), p, release));
    rem.Remove(cands.coverage(winner));
    cands.Remove(winner);
  }

  const PredDpResult p = pred_dp(rem.n - rem.positives, rem.positives);
  ledger.Add(kDefaultNode, AccessKind::kCounts, eps, 0.0);
  out.push_back(MakeRule({}, p, release));
  return {RuleList(std::move(out)), std::move(trace)};
}

TrainResult Train(const BinaryDataset& train, const MinedRuleSet& rules,
                  const LearnerConfig& config) {
  if (config.mechanism == MechanismKind::kNonPrivate) {
    TrainTrace trace;
    trace.mechanism = MechanismKind::kNonPrivate;
    trace.seed = config.seed;
    RuleList model = GreedyRl(train, rules, config, &trace.stop);
    return {std::move(model), std::move(trace)};
  }
  return DpGreedyRl(train, rules, config);
}

nlohmann::json TraceToJson(const TrainTrace& trace) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const NodeRecord& n : trace.nodes) {
    nlohmann::json j = {{"node", n.node},
                        {"noisy_support", n.noisy_support},
                        {"threshold", n.threshold},
                        {"noise_scale", n.noise_scale},
                        {"gini_bound", n.gini_bound},
                        {"noisy_gini", n.noisy_gini}};
    if (n.chosen) j["chosen"] = *n.chosen;
    nodes.push_back(std::move(j));
  }
  nlohmann::json accesses = nlohmann::json::array();
  for (const BudgetAccess& a : trace.accesses) {
    accesses.push_back({{"node", a.node},
                        {"kind", AccessKindName(a.kind)},
                        {"epsilon", a.epsilon},
                        {"delta", a.delta},
                        {"group", a.group}});
  }
  const PrivacyBudget& b = trace.budget;
  return {{"mechanism", MechanismName(trace.mechanism)},
          {"seed", trace.seed},
          {"budget",
           {{"epsilon", b.epsilon_total},
            {"delta", b.delta_total},
            {"max_length", b.max_length},
            {"release_counts", b.release_counts},
            {"epsilon_node", b.epsilon_node},
            {"delta_node", b.delta_node},
            {"beta", b.beta}}},
          {"lambda_abs", trace.lambda_abs},
          {"confidence_threshold", trace.confidence_threshold},
          {"stop_reason", StopReasonName(trace.stop)},
          {"nodes", nodes},
          {"accesses", accesses}};
}

TrainTrace TraceFromJson(const nlohmann::json& j) {
  TrainTrace t;
  try {
    t.mechanism = ParseMechanism(j.at("mechanism").get<std::string>());
    t.seed = j.at("seed").get<std::uint64_t>();
    const auto& b = j.at("budget");
    t.budget.epsilon_total = b.at("epsilon").get<double>();
    t.budget.delta_total = b.at("delta").get<double>();
    t.budget.max_length = b.at("max_length").get<int>();
    t.budget.release_counts = b.at("release_counts").get<bool>();
    t.budget.epsilon_node = b.at("epsilon_node").get<double>();
    t.budget.delta_node = b.at("delta_node").get<double>();
    t.budget.beta = b.at("beta").get<double>();
    t.lambda_abs = j.at("lambda_abs").get<std::size_t>();
    t.confidence_threshold = j.at("confidence_threshold").get<int>();
    t.stop = ParseStopReason(j.at("stop_reason").get<std::string>());
    for (const auto& n : j.at("nodes")) {
      NodeRecord r;
      r.node = n.at("node").get<int>();
      r.noisy_support = n.at("noisy_support").get<double>();
      r.threshold = n.at("threshold").get<double>();
      r.noise_scale = n.at("noise_scale").get<double>();
      r.gini_bound = n.at("gini_bound").get<double>();
      r.noisy_gini = n.at("noisy_gini").get<double>();
      if (n.contains("chosen")) r.chosen = n.at("chosen").get<std::size_t>();
      t.nodes.push_back(r);
    }
    for (const auto& a : j.at("accesses")) {
      t.accesses.push_back({a.at("node").get<int>(),
                            ParseAccessKind(a.at("kind").get<std::string>()),
                            a.at("epsilon").get<double>(), a.at("delta").get<double>(),
                            a.at("group").get<int>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed trace JSON: ") + e.what());
  } catch (const UsageError& e) {
    throw DataError(std::string("malformed trace JSON: ") + e.what());
  }
  return t;
}

AuditReport AuditTrace(const TrainTrace& trace) {
  const PrivacyBudget& recorded = trace.budget;
  PrivacyBudget fresh = MakeBudget(recorded.epsilon_total, recorded.delta_total,
                                   recorded.max_length, recorded.release_counts);
  AuditReport report = AuditAccesses(trace.accesses, fresh);
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::abs(b); };
  if (!close(recorded.epsilon_node, fresh.epsilon_node) ||
      !close(recorded.delta_node, fresh.delta_node) || !close(recorded.beta, fresh.beta)) {
    report.ok = false;
    report.problems.push_back("recorded per-node budget does not match the totals");
  }
  for (const BudgetAccess& a : trace.accesses) {
    if (a.epsilon > fresh.epsilon_node * (1.0 + 1e-12)) {
      report.ok = false;
      report.problems.push_back("access at node " + std::to_string(a.node) +
                                " exceeds eps_node");
    }
  }
  const int learned = static_cast<int>(
      std::count_if(trace.nodes.begin(), trace.nodes.end(),
                    [](const NodeRecord& n) { return n.chosen.has_value(); }));
  if (learned > fresh.max_length - 1) {
    report.ok = false;
    report.problems.push_back("trace learned more rules than the max length allows");
  }
  return report;
}

}  // namespace dprl
