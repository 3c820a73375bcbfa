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

// Exact samalogue arithmetic. Times are integer hundredths or thousandths of
// a second and points are integer thousandths, so pointsum equality is
// decided bit-exactly. No floating point in this header.

#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "samalog/error.hpp"

namespace samalog {

enum class Precision { hundredths, thousandths };

/// Official time in hundredths of a second.
class CentiTime {
 public:
  constexpr CentiTime() = default;
  constexpr explicit CentiTime(std::int64_t hundredths) : value_(hundredths) {
    if (hundredths < 0) throw DomainError("time must be nonnegative");
  }
  constexpr std::int64_t value() const noexcept { return value_; }
  friend constexpr auto operator<=>(CentiTime, CentiTime) = default;

 private:
  std::int64_t value_ = 0;
};

/// Clock time in thousandths of a second.
class MilliTime {
 public:
  constexpr MilliTime() = default;
  constexpr explicit MilliTime(std::int64_t thousandths) : value_(thousandths) {
    if (thousandths < 0) throw DomainError("time must be nonnegative");
  }
  constexpr MilliTime(CentiTime t) : value_(t.value() * 10) {}  // NOLINT: lossless
  constexpr std::int64_t value() const noexcept { return value_; }

  constexpr bool is_centi() const noexcept { return value_ % 10 == 0; }
  /// Truncates the thousandth digit.
  constexpr CentiTime to_centi() const { return CentiTime(value_ / 10); }

  friend constexpr auto operator<=>(MilliTime, MilliTime) = default;

 private:
  std::int64_t value_ = 0;
};

/// Samalogue points in thousandths of a point. One point is one second on
/// the 500-m scale.
class MilliPoints {
 public:
  constexpr MilliPoints() = default;
  constexpr explicit MilliPoints(std::int64_t thousandths) : value_(thousandths) {
    if (thousandths < 0) throw DomainError("points must be nonnegative");
  }
  constexpr std::int64_t value() const noexcept { return value_; }
  friend constexpr auto operator<=>(MilliPoints, MilliPoints) = default;

 private:
  std::int64_t value_ = 0;
};

/// Signed point difference, thousandths of a point.
struct PointDelta {
  std::int64_t value = 0;
  friend constexpr auto operator<=>(PointDelta, PointDelta) = default;
};

/// Signed time difference, thousandths of a second.
struct TimeDelta {
  std::int64_t value = 0;
  friend constexpr auto operator<=>(TimeDelta, TimeDelta) = default;
};

class Distance {
 public:
  constexpr explicit Distance(std::int64_t meters) : meters_(meters) {
    if (meters <= 0) throw DomainError("distance must be positive");
  }
  constexpr std::int64_t meters() const noexcept { return meters_; }
  friend constexpr auto operator<=>(Distance, Distance) = default;

 private:
  std::int64_t meters_;
};

struct RaceResult {
  std::string skater;
  Distance distance;
  MilliTime time;
  std::string session;  // optional label, empty when absent
};

/// Ordered list of distances skated for one pointsum.
class Program {
 public:
  explicit Program(std::vector<Distance> distances) : distances_(std::move(distances)) {
    if (distances_.empty()) throw DomainError("program needs at least one distance");
  }

  /// 500-1000-500-1000.
  static Program sprint() {
    return Program({Distance(500), Distance(1000), Distance(500), Distance(1000)});
  }

  /// `n` distances alternating 500 and 1000, starting with 500.
  static Program alternating_sprint(int n) {
    if (n < 1) throw DomainError("program needs at least one distance");
    std::vector<Distance> d;
    d.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) d.emplace_back(i % 2 == 0 ? 500 : 1000);
    return Program(std::move(d));
  }

  std::span<const Distance> distances() const noexcept { return distances_; }
  std::size_t size() const noexcept { return distances_.size(); }

 private:
  std::vector<Distance> distances_;
};

/// Converts a race time to 500-m-scale points, truncated toward zero at the
/// third decimal: floor(ms * 500 / meters) milli-points.
constexpr MilliPoints to_points(MilliTime time, Distance distance) {
  if (time.value() <= 0) throw DomainError("race time must be positive");
  if (time.value() > std::numeric_limits<std::int64_t>::max() / 500)
    throw DomainError("race time out of range");
  return MilliPoints(time.value() * 500 / distance.meters());
}

/// Sum of the per-distance contributions, each truncated before adding.
inline MilliPoints pointsum(std::span<const RaceResult> results, const Program& program) {
  if (results.size() != program.size()) {
    throw ValidationError("expected " + std::to_string(program.size()) + " results, got " +
                          std::to_string(results.size()));
  }
  std::int64_t total = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const RaceResult& r = results[i];
    if (r.skater != results.front().skater)
      throw ValidationError("results belong to more than one skater");
    if (r.distance != program.distances()[i]) {
      throw ValidationError("race " + std::to_string(i + 1) + " is " +
                            std::to_string(r.distance.meters()) + " m, program expects " +
                            std::to_string(program.distances()[i].meters()) + " m");
    }
    total += to_points(r.time, r.distance).value();
  }
  return MilliPoints(total);
}

constexpr PointDelta deficit(MilliPoints a, MilliPoints b) noexcept {
  return PointDelta{a.value() - b.value()};
}

struct Margin {
  TimeDelta time;
  bool exact = true;  // false when the result was truncated toward zero
};

/// Time on `distance` worth `points_deficit`: deficit * meters / 500.
constexpr Margin margin_time(PointDelta points_deficit, Distance distance) {
  const std::int64_t num = points_deficit.value * distance.meters();
  return Margin{TimeDelta{num / 500}, num % 500 == 0};
}

namespace detail {
constexpr std::int64_t ceil_div(std::int64_t a, std::int64_t b) {  // a >= 0, b > 0
  return (a + b - 1) / b;
}
}  // namespace detail

/// Largest time on `last_distance`, representable at `precision`, whose
/// truncated contribution lifts `own_current` to exactly `target_total`.
///
/// Any time in [ceil(need*m/500), ceil((need+1)*m/500) - 1] ms ties; the top
/// of that interval, rounded down to the precision grid, is returned.
constexpr MilliTime required_time(MilliPoints target_total, MilliPoints own_current,
                                  Distance last_distance,
                                  Precision precision = Precision::hundredths) {
  const std::int64_t need = target_total.value() - own_current.value();
  if (need <= 0) throw InfeasibleError("target pointsum already reached; no positive time ties");
  const std::int64_t m = last_distance.meters();
  const std::int64_t lo = detail::ceil_div(need * m, 500);
  const std::int64_t hi = detail::ceil_div((need + 1) * m, 500) - 1;
  const std::int64_t step = precision == Precision::hundredths ? 10 : 1;
  const std::int64_t best = hi / step * step;
  if (best < lo || best <= 0)
    throw InfeasibleError("no time at the requested precision produces the target pointsum");
  return MilliTime(best);
}

constexpr std::strong_ordering compare_at_precision(MilliTime a, MilliTime b,
                                                    Precision precision) noexcept {
  if (precision == Precision::hundredths) return a.value() / 10 <=> b.value() / 10;
  return a.value() <=> b.value();
}

}  // namespace samalog
