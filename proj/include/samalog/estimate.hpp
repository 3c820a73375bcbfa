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

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "samalog/error.hpp"
#include "samalog/samalogue.hpp"

namespace samalog {

/// One skater's race results as 500-m-equivalent times in seconds.
struct SkaterSample {
  std::string skater;
  std::vector<double> points_per_race;
};

inline double to_seconds(MilliPoints p) noexcept { return static_cast<double>(p.value()) / 1000.0; }

/// Unbiased sample variance (divisor n-1), two-pass about the sample mean.
inline double sample_variance(const SkaterSample& sample) {
  const auto& x = sample.points_per_race;
  if (x.size() < 2) throw DomainError("sample variance needs at least two observations");
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double ss = 0.0;
  double drift = 0.0;  // corrected two-pass: removes rounding in the mean
  for (double v : x) {
    ss += (v - mean) * (v - mean);
    drift += v - mean;
  }
  ss -= drift * drift / static_cast<double>(x.size());
  return std::max(ss, 0.0) / static_cast<double>(x.size() - 1);
}

/// Square root of the unweighted mean of the per-skater sample variances.
inline double pooled_sigma(std::span<const SkaterSample> samples) {
  if (samples.empty()) throw DomainError("pooled_sigma needs at least one sample");
  double sum = 0.0;
  for (const auto& s : samples) sum += sample_variance(s);
  return std::sqrt(sum / static_cast<double>(samples.size()));
}

}  // namespace samalog
