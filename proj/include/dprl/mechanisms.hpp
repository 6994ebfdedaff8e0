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
// Noise samplers and the differentially-private mechanisms built on them.
//
// All randomness comes from a NoiseSource, a seeded std::mt19937_64. The
// samplers below are written against its raw 64-bit output (not the std::
// distributions), so a given seed yields the same draws on every platform.

#ifndef DPRL_MECHANISMS_HPP_
#define DPRL_MECHANISMS_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dprl {

// Single-owner pseudo-random stream. Movable, not meant to be shared.
class NoiseSource {
 public:
  explicit NoiseSource(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t draws() const { return draws_; }

  // Uniform on the open interval (0, 1).
  double Uniform();

 private:
  std::uint64_t seed_;
  std::uint64_t draws_ = 0;
  std::mt19937_64 engine_;
};

// Laplace(0, b) by inverse CDF.
double SampleLaplace(NoiseSource& source, double scale_b);
// N(0, sigma^2) by Box-Muller (one uniform pair per draw).
double SampleGaussian(NoiseSource& source, double sigma);
// Draw from the density proportional to 1 / (1 + |z|^gamma), gamma > 1.
// gamma = 2 is the standard Cauchy, sampled exactly by inverse CDF; other
// values use rejection sampling.
double SampleCauchy(NoiseSource& source, double gamma);

// value + Lap(delta1 / eps).
double LaplaceGlobal(double value, double delta1, double eps, NoiseSource& source);

// sigma = c * delta2 / eps with c just above sqrt(2 ln(1.25 / delta)).
double GaussianCalibration(double delta);
double GaussianSigma(double delta2, double eps, double delta);
double GaussianGlobal(double value, double delta2, double eps, double delta, NoiseSource& source);

// value + (2 S* / eps) * Lap(1). (eps, delta)-DP when beta <= eps / (2 ln(2/delta)).
double LaplaceSmooth(double value, double s_star, double eps, NoiseSource& source);
// value + (2 (gamma + 1) S* / eps) * eta. (eps, 0)-DP when beta <= eps / (2 (gamma + 1)).
double CauchySmooth(double value, double s_star, double eps, double gamma, NoiseSource& source);

// Selection probabilities proportional to exp(eps * u / (2 delta_u)).
std::vector<double> ExponentialProbabilities(std::span<const double> utilities, double delta_u,
                                             double eps);
std::size_t ExponentialMechanism(std::span<const double> utilities, double delta_u, double eps,
                                 NoiseSource& source);

enum class Direction { kMax, kMin };

// Adds noise(i) to values[i] (drawn in index order) and returns the index of
// the extremal noisy value; ties keep the lowest index.
template <typename NoiseFn>
std::size_t NoisyMaxReport(std::span<const double> values, NoiseFn&& noise, Direction direction) {
  std::size_t best = 0;
  double best_value = direction == Direction::kMax ? -std::numeric_limits<double>::infinity()
                                                   : std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i] + noise(i);
    if (direction == Direction::kMax ? v > best_value : v < best_value) {
      best = i;
      best_value = v;
    }
  }
  return best;
}

enum class MechanismKind {
  kNonPrivate,
  kGlobalLaplace,
  kGlobalGaussian,
  kSmoothLaplace,
  kSmoothCauchy,
  kExponential,
  kNoisyCounts,
};

// CLI names: none, gl-laplace, gl-gaussian, sm-laplace, sm-cauchy,
// exponential, noisy-counts.
std::string_view MechanismName(MechanismKind kind);
MechanismKind ParseMechanism(std::string_view name);  // throws UsageError
bool UsesSmoothSensitivity(MechanismKind kind);
std::span<const MechanismKind> PrivateMechanisms();

}  // namespace dprl

#endif  // DPRL_MECHANISMS_HPP_
