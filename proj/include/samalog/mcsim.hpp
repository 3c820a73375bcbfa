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

// Plain Monte Carlo oracle for the closed forms in tieprob.hpp.
//
// Each trial owns the counter-based substream (seed, trial index), and tie
// counts are integers, so the result is bit-identical for any worker count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

#include "samalog/error.hpp"
#include "samalog/rng.hpp"
#include "samalog/samalogue.hpp"
#include "samalog/tieprob.hpp"

namespace samalog {

enum class Discretization { none, truncate_to_hundredths, round_to_hundredths };

enum class TieRule {
  window,                  // |X - Y| < eps on the continuous pointsums
  exact_pointsum_equality  // official MilliPoints equal (continuous equality under `none`)
};

struct SimConfig {
  TieScenario scenario;
  Program program = Program::sprint();
  std::uint64_t n_trials = 1'000'000;
  std::uint64_t seed = 42;
  Discretization discretization = Discretization::truncate_to_hundredths;
  TieRule tie_rule = TieRule::window;
  double baseline = 37.0;  // mean 500-m time of the second skater
  unsigned workers = 1;    // 0 = hardware concurrency

  void validate() const {
    if (n_trials == 0) throw DomainError("n_trials must be positive");
    scenario.validate();
    if (!std::isfinite(baseline) || baseline <= 0.0) throw DomainError("baseline must be positive");
  }
};

struct SimResult {
  std::uint64_t ties = 0;
  std::uint64_t n_trials = 0;
  double p_hat = 0.0;
  double std_error = 0.0;
  std::uint64_t seed = 0;

  static SimResult from_counts(std::uint64_t ties, std::uint64_t n_trials, std::uint64_t seed) {
    const double p = static_cast<double>(ties) / static_cast<double>(n_trials);
    return {ties, n_trials, p, std::sqrt(p * (1.0 - p) / static_cast<double>(n_trials)), seed};
  }

  friend bool operator==(const SimResult&, const SimResult&) = default;
};

/// Pointsums of one simulated pair. `x`, `y` are the continuous sums in
/// points; the official sums are present unless discretization is `none`.
struct PairOutcome {
  double x = 0.0;
  double y = 0.0;
  std::optional<MilliPoints> x_official;
  std::optional<MilliPoints> y_official;
};

namespace detail {

inline MilliTime official_time(double raw_seconds, Discretization mode) {
  const double hundredths =
      mode == Discretization::round_to_hundredths ? std::nearbyint(raw_seconds * 100.0)
                                                  : std::floor(raw_seconds * 100.0);
  if (!(hundredths >= 1.0)) throw DomainError("simulated race time is not positive");
  return MilliTime(CentiTime(static_cast<std::int64_t>(hundredths)));
}

}  // namespace detail

/// Draws one 500-m-scale result per distance for each skater (means
/// baseline + delta and baseline), scales to raw distance time, applies the
/// official clock discretization, and sums points.
inline PairOutcome simulate_pair(CounterStream& stream, const TieScenario& scenario,
                                 const Program& program, Discretization discretization,
                                 double baseline = 37.0) {
  PairOutcome out;
  std::int64_t x_milli = 0;
  std::int64_t y_milli = 0;
  for (const Distance d : program.distances()) {
    const double scale = static_cast<double>(d.meters()) / 500.0;
    const double x_raw = sample_normal(stream, baseline + scenario.delta, scenario.sigma) * scale;
    const double y_raw = sample_normal(stream, baseline, scenario.sigma) * scale;
    out.x += x_raw / scale;
    out.y += y_raw / scale;
    if (discretization != Discretization::none) {
      x_milli += to_points(detail::official_time(x_raw, discretization), d).value();
      y_milli += to_points(detail::official_time(y_raw, discretization), d).value();
    }
  }
  if (discretization != Discretization::none) {
    out.x_official = MilliPoints(x_milli);
    out.y_official = MilliPoints(y_milli);
  }
  return out;
}

namespace detail {

inline bool is_tie(const PairOutcome& o, TieRule rule, double epsilon) {
  if (rule == TieRule::window) return std::abs(o.x - o.y) < epsilon;
  if (o.x_official) return *o.x_official == *o.y_official;
  return o.x == o.y;
}

// Counts ties over trials [0, n) split into contiguous chunks, one per worker.
template <class Trial>
std::uint64_t count_ties(const SimConfig& cfg, Trial&& trial) {
  unsigned workers = cfg.workers == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                      : cfg.workers;
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, cfg.n_trials));
  auto run_range = [&](std::uint64_t begin, std::uint64_t end) {
    std::uint64_t ties = 0;
    for (std::uint64_t i = begin; i < end; ++i) {
      CounterStream stream(cfg.seed, i);
      if (trial(stream)) ++ties;
    }
    return ties;
  };
  if (workers <= 1) return run_range(0, cfg.n_trials);

  std::vector<std::uint64_t> partial(workers, 0);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::uint64_t chunk = cfg.n_trials / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t begin = w * chunk;
      const std::uint64_t end = w + 1 == workers ? cfg.n_trials : begin + chunk;
      pool.emplace_back([&, w, begin, end] { partial[w] = run_range(begin, end); });
    }
  }
  std::uint64_t total = 0;
  for (auto t : partial) total += t;
  return total;
}

}  // namespace detail

/// Fixed-delta simulation; `scenario.tau` is ignored.
inline SimResult run(const SimConfig& config) {
  config.validate();
  const std::uint64_t ties = detail::count_ties(config, [&](CounterStream& stream) {
    const PairOutcome o = simulate_pair(stream, config.scenario, config.program,
                                        config.discretization, config.baseline);
    return detail::is_tie(o, config.tie_rule, config.scenario.epsilon);
  });
  return SimResult::from_counts(ties, config.n_trials, config.seed);
}

/// Each trial first draws delta ~ N(0, tau^2) from its own substream, then
/// proceeds as `run`.
inline SimResult run_random_delta(const SimConfig& config) {
  config.validate();
  if (!(config.scenario.tau > 0.0)) throw DomainError("run_random_delta needs tau > 0; use run");
  const std::uint64_t ties = detail::count_ties(config, [&](CounterStream& stream) {
    TieScenario trial_scenario = config.scenario;
    trial_scenario.delta = sample_normal(stream, 0.0, config.scenario.tau);
    const PairOutcome o = simulate_pair(stream, trial_scenario, config.program,
                                        config.discretization, config.baseline);
    return detail::is_tie(o, config.tie_rule, config.scenario.epsilon);
  });
  return SimResult::from_counts(ties, config.n_trials, config.seed);
}

}  // namespace samalog
