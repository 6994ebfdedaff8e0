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
#include "dprl/gini.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dprl/errors.hpp"

namespace dprl {
namespace {

double SideImpurity(double n, double positives, double total) {
  if (n <= 0.0) return 0.0;
  const double mean = positives / n;
  const double weight = n / total;
  return weight * (1.0 - mean * mean - (1.0 - mean) * (1.0 - mean));
}

double Xi(std::size_t n, std::size_t lambda, double beta, std::size_t k) {
  const std::size_t support = k >= n ? lambda : std::max(lambda, n - k);
  return std::exp(-static_cast<double>(k) * beta) *
         GiniSensitivityCurve(static_cast<double>(support));
}

}  // namespace

double GiniReduction(const GiniStats& s) {
  if (s.captured_positive > s.n_captured || s.left_positive > s.n_left) {
    throw UsageError("positive count exceeds group size");
  }
  const std::size_t total = s.n_captured + s.n_left;
  if (total == 0) throw UsageError("Gini reduction of two empty groups is undefined");
  return SideImpurity(static_cast<double>(s.n_captured), static_cast<double>(s.captured_positive),
                      static_cast<double>(total)) +
         SideImpurity(static_cast<double>(s.n_left), static_cast<double>(s.left_positive),
                      static_cast<double>(total));
}

double GiniFromCounts(double captured_negative, double captured_positive, double left_negative,
                      double left_positive) {
  const double n_captured = captured_negative + captured_positive;
  const double n_left = left_negative + left_positive;
  const double total = n_captured + n_left;
  if (!(total > 0.0)) return 0.0;
  return SideImpurity(n_captured, captured_positive, total) +
         SideImpurity(n_left, left_positive, total);
}

double GiniImpurity(std::size_t n, std::size_t positives) {
  if (n == 0) return 0.0;
  return GiniReduction({0, n, 0, positives});
}

double GiniSensitivityCurve(double x) {
  const double d = x + 1.0;
  return 2.0 * x / (d * d);
}

double LocalSensitivity(std::size_t n_remaining) {
  if (n_remaining < 1) throw UsageError("local sensitivity needs at least one sample");
  return GiniSensitivityCurve(static_cast<double>(n_remaining));
}

void ValidateBeta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw UsageError("beta must be positive and finite, got " + std::to_string(beta));
  }
  for (double bad : {kDegenerateBetaLow, kDegenerateBetaHigh}) {
    if (std::abs(beta - bad) <= 1e-12 * bad) {
      throw UsageError("beta = " + std::to_string(beta) +
                       " is a double root of the sensitivity polynomial; choose another value");
    }
  }
}

void SensitivityContext::Validate() const {
  if (lambda_abs < 1) throw UsageError("minimum support must be at least 1");
  if (n_remaining < lambda_abs) {
    throw UsageError("n_remaining (" + std::to_string(n_remaining) +
                     ") is below the minimum support (" + std::to_string(lambda_abs) + ")");
  }
  ValidateBeta(beta);
}

double SmoothSensitivity(const SensitivityContext& ctx) {
  ctx.Validate();
  const std::size_t n = ctx.n_remaining;
  const std::size_t lambda = ctx.lambda_abs;
  const double beta = ctx.beta;
  const std::size_t last = n - lambda;

  double best = std::max(Xi(n, lambda, beta, 0), Xi(n, lambda, beta, last));

  const double a = 1.0 - beta;
  const double disc = a * a - 4.0 * beta;
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    // Smaller root; the product form avoids cancellation for small beta.
    const double y2 = a > 0.0 ? 2.0 / (a + root) : (a - root) / (2.0 * beta);
    const double t = static_cast<double>(n) - y2;
    for (double c : {std::floor(t), std::ceil(t)}) {
      const double clamped = std::clamp(c, 0.0, static_cast<double>(last));
      best = std::max(best, Xi(n, lambda, beta, static_cast<std::size_t>(clamped)));
    }
  }
  return best;
}

double SmoothSensitivityOracle(const SensitivityContext& ctx) {
  ctx.Validate();
  const std::size_t last = ctx.n_remaining - ctx.lambda_abs;
  double best = 0.0;
  for (std::size_t k = 0; k <= last; ++k) {
    best = std::max(best, Xi(ctx.n_remaining, ctx.lambda_abs, ctx.beta, k));
  }
  return best;
}

}  // namespace dprl
