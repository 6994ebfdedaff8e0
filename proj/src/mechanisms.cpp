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
#include "dprl/mechanisms.hpp"

#include <algorithm>
#include <array>
#include <numbers>

#include "dprl/errors.hpp"
#include "dprl/rng.hpp"

namespace dprl {
namespace {

void RequirePositive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw UsageError(std::string(what) + " must be positive and finite");
  }
}

constexpr std::array<MechanismKind, 6> kPrivate = {
    MechanismKind::kSmoothLaplace, MechanismKind::kSmoothCauchy, MechanismKind::kGlobalLaplace,
    MechanismKind::kGlobalGaussian, MechanismKind::kExponential, MechanismKind::kNoisyCounts};

}  // namespace

NoiseSource::NoiseSource(std::uint64_t seed) : seed_(seed), engine_(SplitMix64(seed)) {}

double NoiseSource::Uniform() {
  ++draws_;
  return UniformOpen(engine_);
}

double SampleLaplace(NoiseSource& source, double scale_b) {
  RequirePositive(scale_b, "Laplace scale");
  const double u = source.Uniform() - 0.5;
  // 1 - 2|u| lies in (0, 1] because the uniform excludes both endpoints.
  return -scale_b * std::copysign(1.0, u) * std::log1p(-2.0 * std::abs(u));
}

double SampleGaussian(NoiseSource& source, double sigma) {
  RequirePositive(sigma, "Gaussian sigma");
  const double u1 = source.Uniform();
  const double u2 = source.Uniform();
  return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double SampleCauchy(NoiseSource& source, double gamma) {
  if (!(gamma > 1.0) || !std::isfinite(gamma)) throw UsageError("Cauchy gamma must exceed 1");
  if (gamma == 2.0) return std::tan(std::numbers::pi * (source.Uniform() - 0.5));
  if (gamma > 2.0) {
    // Standard Cauchy envelope: (1 + z^2) / (1 + |z|^gamma) <= 2 for gamma >= 2.
    for (;;) {
      const double z = std::tan(std::numbers::pi * (source.Uniform() - 0.5));
      const double ratio = (1.0 + z * z) / (1.0 + std::pow(std::abs(z), gamma));
      if (source.Uniform() * 2.0 <= ratio) return z;
    }
  }
  // 1 < gamma < 2: the target tail is heavier than Cauchy, so the envelope is
  // the symmetric density proportional to (1 + |z|)^-gamma, for which
  // (1 + |z|)^gamma / (1 + |z|^gamma) <= 2^(gamma - 1).
  const double bound = std::pow(2.0, gamma - 1.0);
  for (;;) {
    const double magnitude = std::pow(source.Uniform(), -1.0 / (gamma - 1.0)) - 1.0;
    const double z = source.Uniform() < 0.5 ? -magnitude : magnitude;
    const double ratio = std::pow(1.0 + magnitude, gamma) / (1.0 + std::pow(magnitude, gamma));
    if (source.Uniform() * bound <= ratio) return z;
  }
}

double LaplaceGlobal(double value, double delta1, double eps, NoiseSource& source) {
  RequirePositive(delta1, "L1 sensitivity");
  RequirePositive(eps, "epsilon");
  return value + SampleLaplace(source, delta1 / eps);
}

double GaussianCalibration(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw UsageError("delta must lie in (0, 1)");
  return std::sqrt(2.0 * std::log(1.25 / delta)) * (1.0 + 1e-9);
}

double GaussianSigma(double delta2, double eps, double delta) {
  RequirePositive(delta2, "L2 sensitivity");
  RequirePositive(eps, "epsilon");
  return GaussianCalibration(delta) * delta2 / eps;
}

double GaussianGlobal(double value, double delta2, double eps, double delta,
                      NoiseSource& source) {
  return value + SampleGaussian(source, GaussianSigma(delta2, eps, delta));
}

double LaplaceSmooth(double value, double s_star, double eps, NoiseSource& source) {
  RequirePositive(eps, "epsilon");
  if (!(s_star >= 0.0)) throw UsageError("smooth sensitivity must be non-negative");
  if (s_star == 0.0) return value;
  return value + (2.0 * s_star / eps) * SampleLaplace(source, 1.0);
}

double CauchySmooth(double value, double s_star, double eps, double gamma, NoiseSource& source) {
  RequirePositive(eps, "epsilon");
  if (!(s_star >= 0.0)) throw UsageError("smooth sensitivity must be non-negative");
  if (s_star == 0.0) return value;
  return value + (2.0 * (gamma + 1.0) * s_star / eps) * SampleCauchy(source, gamma);
}

std::vector<double> ExponentialProbabilities(std::span<const double> utilities, double delta_u,
                                             double eps) {
  if (utilities.empty()) throw UsageError("exponential mechanism needs at least one option");
  RequirePositive(delta_u, "utility sensitivity");
  RequirePositive(eps, "epsilon");
  const double top = *std::max_element(utilities.begin(), utilities.end());
  std::vector<double> w(utilities.size());
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = std::exp(eps * (utilities[i] - top) / (2.0 * delta_u));
    total += w[i];
  }
  for (double& x : w) x /= total;
  return w;
}

std::size_t ExponentialMechanism(std::span<const double> utilities, double delta_u, double eps,
                                 NoiseSource& source) {
  const auto p = ExponentialProbabilities(utilities, delta_u, eps);
  const double u = source.Uniform();
  double cumulative = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    cumulative += p[i];
    if (u < cumulative) return i;
  }
  // Rounding left the cumulative sum just below u: take the last option with
  // non-zero mass.
  for (std::size_t i = p.size(); i-- > 0;) {
    if (p[i] > 0.0) return i;
  }
  return p.size() - 1;
}

std::string_view MechanismName(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kNonPrivate: return "none";
    case MechanismKind::kGlobalLaplace: return "gl-laplace";
    case MechanismKind::kGlobalGaussian: return "gl-gaussian";
    case MechanismKind::kSmoothLaplace: return "sm-laplace";
    case MechanismKind::kSmoothCauchy: return "sm-cauchy";
    case MechanismKind::kExponential: return "exponential";
    case MechanismKind::kNoisyCounts: return "noisy-counts";
  }
  return "unknown";
}

MechanismKind ParseMechanism(std::string_view name) {
  for (MechanismKind k : kPrivate) {
    if (MechanismName(k) == name) return k;
  }
  if (name == "none") return MechanismKind::kNonPrivate;
  throw UsageError("unknown mechanism '" + std::string(name) +
                   "' (expected none, sm-laplace, sm-cauchy, gl-laplace, gl-gaussian, "
                   "exponential or noisy-counts)");
}

bool UsesSmoothSensitivity(MechanismKind kind) {
  return kind == MechanismKind::kSmoothLaplace || kind == MechanismKind::kSmoothCauchy;
}

std::span<const MechanismKind> PrivateMechanisms() { return kPrivate; }

}  // namespace dprl
