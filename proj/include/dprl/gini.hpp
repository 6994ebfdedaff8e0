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
// Gini impurity reduction of a rule and the local / smooth sensitivity of the
// Gini impurity as a function of the number of samples left to classify.

#ifndef DPRL_GINI_HPP_
#define DPRL_GINI_HPP_

#include <cstddef>

namespace dprl {

struct GiniStats {
  std::size_t n_captured = 0;
  std::size_t n_left = 0;
  std::size_t captured_positive = 0;
  std::size_t left_positive = 0;
};

// Weighted impurity of the captured / not-captured split, in [0, 0.5]. An
// empty side contributes 0. Throws UsageError when both sides are empty.
double GiniReduction(const GiniStats& stats);

// GiniReduction over real-valued label counts (noisy counts after clamping
// at 0). Returns 0 when every count is 0. Agrees bit-for-bit with
// GiniReduction on integral inputs.
double GiniFromCounts(double captured_negative, double captured_positive, double left_negative,
                      double left_positive);

// Impurity of a single group of `n` samples with `positives` label-1 samples,
// i.e. GiniReduction with nothing captured. Returns 0 for n = 0.
double GiniImpurity(std::size_t n, std::size_t positives);

// g(x) = 1 - (x/(x+1))^2 - (1/(x+1))^2 = 2x/(x+1)^2: the local sensitivity of
// the Gini impurity at a dataset of x samples. Increasing on [0, 1],
// decreasing on [1, inf), maximum g(1) = 1/2.
double GiniSensitivityCurve(double x);

// Local sensitivity at n_remaining >= 1 samples.
double LocalSensitivity(std::size_t n_remaining);

// The two values of beta at which the discriminant (1 - beta)^2 - 4 beta
// vanishes. They are rejected as smoothing parameters.
inline constexpr double kDegenerateBetaLow = 0.17157287525380990;   // 3 - 2 sqrt(2)
inline constexpr double kDegenerateBetaHigh = 5.8284271247461903;   // 3 + 2 sqrt(2)

struct SensitivityContext {
  std::size_t n_remaining = 1;  // samples left to classify
  std::size_t lambda_abs = 1;   // absolute minimum support
  double beta = 0.0;            // smoothing parameter

  // Throws UsageError unless n_remaining >= lambda_abs >= 1, beta > 0 finite
  // and beta is not one of the degenerate values.
  void Validate() const;
};

// Throws UsageError for non-positive or degenerate beta.
void ValidateBeta(double beta);

// Closed form: the maximum of xi(k) = exp(-k beta) g(max(lambda, n - k)) over
// k in {0, floor(t), ceil(t), n - lambda}, where t = n - y2 and y2 is the
// smaller root of beta y^2 - (1 - beta) y + 1. Interior candidates are clamped
// into [0, n - lambda] and skipped when the discriminant is negative.
double SmoothSensitivity(const SensitivityContext& ctx);

// Exhaustive maximum of xi(k) over k in [0, n - lambda]. Beyond n - lambda the
// local-sensitivity term is constant while the exponential decays, so the
// finite range is exact.
double SmoothSensitivityOracle(const SensitivityContext& ctx);

}  // namespace dprl

#endif  // DPRL_GINI_HPP_
