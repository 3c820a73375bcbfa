// Copyright 2026 The samalog Authors
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

#pragma once

// Closed-form probability that two skaters finish within a small window of
// each other after n races.
//
// Model: each race result on the 500-m scale is N(mu_i, sigma^2), all
// independent. Over n races the pointsum difference is
//   Z = X - Y ~ N(n*delta, 2*n*sigma^2),   delta = mu_1 - mu_2.
// The tie probability P(|Z| < eps) is linearized as density(0) * 2*eps.
// Units: delta, sigma, tau in seconds on the 500-m scale; eps in points.

#include <algorithm>
#include <cmath>
#include <numbers>

#include "samalog/error.hpp"

namespace samalog {

struct SkaterAbility {
  double mu = 0.0;
  double sigma = 0.0;
};

struct TieScenario {
  double delta = 0.0;
  double sigma = 0.5;
  double epsilon = 0.005;
  double tau = 0.0;  // sd of the N(0, tau^2) prior on delta; 0 means fixed delta
  int n_distances = 4;

  /// Throws DomainError naming the first offending field.
  void validate() const {
    if (!std::isfinite(delta)) throw DomainError("delta must be finite");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be positive");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
      throw DomainError("epsilon must be positive");
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw DomainError("tau must be nonnegative");
    if (n_distances < 1) throw DomainError("n_distances must be at least 1");
  }
};

/// A probability in [0, 1]. `clamped()` is set when a closed form exceeded 1
/// and was cut back.
class Probability {
 public:
  constexpr Probability() = default;
  explicit Probability(double raw) : value_(std::clamp(raw, 0.0, 1.0)), clamped_(raw > 1.0) {
    if (std::isnan(raw)) throw DomainError("probability is NaN");
  }
  constexpr double value() const noexcept { return value_; }
  constexpr bool clamped() const noexcept { return clamped_; }
  constexpr double per_mille() const noexcept { return value_ * 1000.0; }

 private:
  double value_ = 0.0;
  bool clamped_ = false;
};

inline double normal_pdf(double z) noexcept {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

/// Standard normal CDF via the C library complementary error function
/// (glibc erfc is accurate to a few ulp, well inside 1e-10 absolute).
inline double normal_cdf(double z) noexcept {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

namespace detail {
inline double difference_sd(const TieScenario& s) {
  return std::sqrt(2.0 * s.n_distances) * s.sigma;
}
}  // namespace detail

/// phi(n*delta / sd) / sd * 2*eps with sd = sqrt(2n)*sigma. For n = 4 this is
/// exp(-delta^2/sigma^2) * 2*eps / (sqrt(2*pi) * sqrt(8) * sigma).
inline Probability tie_prob_fixed(const TieScenario& s) {
  s.validate();
  const double sd = detail::difference_sd(s);
  return Probability(normal_pdf(s.n_distances * s.delta / sd) / sd * 2.0 * s.epsilon);
}

/// tie_prob_fixed integrated against delta ~ N(0, tau^2):
///   2*eps / (sqrt(2*pi) * sqrt(2n*sigma^2 + n^2*tau^2)).
/// `s.delta` is ignored. For n = 4 the root is sqrt(8)*sigma*sqrt(1 + 2*tau^2/sigma^2).
inline Probability tie_prob_random_delta(const TieScenario& s) {
  s.validate();
  const double n = s.n_distances;
  const double spread =
      std::sqrt(2.0 * n * s.sigma * s.sigma + n * n * s.tau * s.tau);
  return Probability(2.0 * s.epsilon / (std::sqrt(2.0 * std::numbers::pi) * spread));
}

/// P(|Z| < eps) without linearization: Phi(b) - Phi(a), a = (-eps - n*delta)/sd,
/// b = (eps - n*delta)/sd. Evaluated through erf or erfc depending on where
/// the interval sits so the small difference does not cancel. Accepts eps = 0.
inline Probability tie_prob_exact(const TieScenario& s) {
  TieScenario check = s;
  if (s.epsilon == 0.0) check.epsilon = 1.0;
  check.validate();
  if (s.epsilon == 0.0) return Probability(0.0);

  const double sd = detail::difference_sd(s);
  const double centre = s.n_distances * s.delta;
  const double a = (-s.epsilon - centre) / sd / std::numbers::sqrt2;
  const double b = (s.epsilon - centre) / sd / std::numbers::sqrt2;
  double p;
  if (a >= 0.0) {
    p = 0.5 * (std::erfc(a) - std::erfc(b));
  } else if (b <= 0.0) {
    p = 0.5 * (std::erfc(-b) - std::erfc(-a));
  } else {
    p = 0.5 * (std::erf(b) - std::erf(a));
  }
  return Probability(p);
}

/// Expected number of independent repetitions until the first tie, 1/p.
inline double expected_trials(double p) {
  if (!(p > 0.0) || p > 1.0) throw DomainError("expected_trials needs 0 < p <= 1");
  return 1.0 / p;
}

inline double expected_trials(Probability p) { return expected_trials(p.value()); }

}  // namespace samalog
