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

// Command-line front end. `run_cli` is the whole program minus process
// plumbing so tests can drive it in-process.
//
// Exit codes: 0 success, 1 computation-domain error, 2 usage or validation
// error.

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "samalog/samalog.hpp"

namespace samalog::cli {

enum class OutputMode { human, csv };

/// Bad flags or inconsistent input; exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

inline std::string prob(double p) { return fmt::format("{:.6g}", p); }
inline std::string real(double x) { return fmt::format("{:.6g}", x); }

inline std::vector<double> parse_list(const std::string& flag, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto t = samalog::detail::trim(item);
    if (t.empty()) continue;
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(std::string(t), &used);
    } catch (const std::exception&) {
      throw UsageError(flag + ": not a number '" + std::string(t) + "'");
    }
    if (used != t.size() || !std::isfinite(v))
      throw UsageError(flag + ": not a number '" + std::string(t) + "'");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError(flag + ": grid is empty");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline void check_scenario(const TieScenario& s) {
  try {
    s.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

/// Rows grouped by skater name, in order of first appearance.
inline std::vector<std::pair<std::string, std::vector<RaceResult>>> group_by_skater(
    const std::vector<RaceResult>& rows) {
  std::vector<std::pair<std::string, std::vector<RaceResult>>> groups;
  std::map<std::string, std::size_t> index;
  for (const auto& r : rows) {
    auto [it, inserted] = index.try_emplace(r.skater, groups.size());
    if (inserted) groups.emplace_back(r.skater, std::vector<RaceResult>{});
    groups[it->second].second.push_back(r);
  }
  return groups;
}

inline std::vector<RaceResult> load_results(const std::string& path) {
  try {
    return read_results_file(path);
  } catch (const ParseError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

struct Context {
  OutputMode mode = OutputMode::human;
  std::optional<std::uint64_t> seed;
  std::string config_path;
  std::ostream& out;
  std::ostream& err;
};

inline int cmd_points(Context& ctx, const std::string& csv_path, const std::string& program_text) {
  const Program program = parse_program(program_text);
  const auto rows = load_results(csv_path);
  struct Standing {
    std::string skater;
    MilliPoints points;
  };
  std::vector<Standing> standings;
  std::vector<std::string> problems;
  for (const auto& [skater, results] : group_by_skater(rows)) {
    try {
      standings.push_back({skater, pointsum(results, program)});
    } catch (const ValidationError& e) {
      problems.push_back(skater + ": " + e.what());
    }
  }
  if (!problems.empty()) {
    for (const auto& p : problems) ctx.err << "error: " << p << '\n';
    return 2;
  }
  std::stable_sort(standings.begin(), standings.end(),
                   [](const Standing& a, const Standing& b) { return a.points < b.points; });

  if (ctx.mode == OutputMode::csv) ctx.out << "rank,skater,pointsum\n";
  else ctx.out << fmt::format("{:>4}  {:<28} {:>10}\n", "rank", "skater", "pointsum");
  std::size_t rank = 0;
  for (std::size_t i = 0; i < standings.size(); ++i) {
    if (i == 0 || standings[i].points != standings[i - 1].points) rank = i + 1;
    const std::string pts = format_points(standings[i].points);
    if (ctx.mode == OutputMode::csv) {
      ctx.out << rank << ',' << csv_field(standings[i].skater) << ',' << pts << '\n';
    } else {
      ctx.out << fmt::format("{:>4}  {:<28} {:>10}\n", rank, standings[i].skater, pts);
    }
  }
  return 0;
}

inline int cmd_required_time(Context& ctx, const std::string& target_text,
                             const std::string& own_text, std::int64_t meters,
                             const std::string& precision_text) {
  MilliPoints target, own;
  try {
    target = parse_points(target_text);
    own = parse_points(own_text);
  } catch (const ParseError& e) {
    throw UsageError(std::string("points: ") + e.what());
  }
  if (meters <= 0) throw UsageError("distance must be positive");
  const Precision precision =
      precision_text == "thousandths" ? Precision::thousandths : Precision::hundredths;
  MilliTime t;
  try {
    t = required_time(target, own, Distance(meters), precision);
  } catch (const InfeasibleError& e) {
    ctx.err << "error: infeasible: " << e.what() << '\n';
    return 2;
  }
  const std::string shown = format_time(t, precision);
  if (ctx.mode == OutputMode::csv) {
    ctx.out << "target,own,distance_m,required_time\n"
            << format_points(target) << ',' << format_points(own) << ',' << meters << ','
            << shown << '\n';
  } else {
    ctx.out << fmt::format("needs {} points on {} m: skate {} (slowest tying time)\n",
                           format_points(target.value() - own.value()), meters, shown);
  }
  return 0;
}

struct ProbRow {
  TieScenario s;
  double fixed, random, exact;
};

inline ProbRow evaluate(const TieScenario& s) {
  return {s, tie_prob_fixed(s).value(), tie_prob_random_delta(s).value(),
          tie_prob_exact(s).value()};
}

inline int cmd_tie_prob(Context& ctx, const TieScenario& s) {
  check_scenario(s);
  const ProbRow r = evaluate(s);
  const double headline = s.tau > 0 ? r.random : r.fixed;
  const double trials = expected_trials(headline);
  if (ctx.mode == OutputMode::csv) {
    ctx.out << "delta,sigma,tau,epsilon,n_distances,p_fixed,p_random,p_exact,expected_trials\n"
            << real(s.delta) << ',' << real(s.sigma) << ',' << real(s.tau) << ','
            << real(s.epsilon) << ',' << s.n_distances << ',' << prob(r.fixed) << ','
            << prob(r.random) << ',' << prob(r.exact) << ',' << fmt::format("{:.1f}", trials)
            << '\n';
    return 0;
  }
  ctx.out << fmt::format("delta={} sigma={} tau={} epsilon={} n_distances={}\n", real(s.delta),
                         real(s.sigma), real(s.tau), real(s.epsilon), s.n_distances);
  ctx.out << fmt::format("  fixed delta       p = {:<12} ({:.3f} per mille)\n", prob(r.fixed),
                         r.fixed * 1000);
  if (s.tau > 0) {
    ctx.out << fmt::format("  random delta      p = {:<12} ({:.3f} per mille)\n",
                           prob(r.random), r.random * 1000);
  }
  ctx.out << fmt::format("  exact normal CDF  p = {:<12} ({:.3f} per mille)\n", prob(r.exact),
                         r.exact * 1000);
  ctx.out << fmt::format("  expected trials until a tie: {:.1f} (1 in ~{:.0f})\n", trials,
                         std::round(trials));
  return 0;
}

inline int cmd_estimate_sigma(Context& ctx, const std::string& csv_path) {
  const auto rows = load_results(csv_path);
  std::vector<SkaterSample> samples;
  for (const auto& [skater, results] : group_by_skater(rows)) {
    SkaterSample s{skater, {}};
    for (const auto& r : results) s.points_per_race.push_back(to_seconds(to_points(r.time, r.distance)));
    if (s.points_per_race.size() < 2) {
      ctx.err << "warning: " << skater << " has fewer than 2 races; excluded\n";
      continue;
    }
    samples.push_back(std::move(s));
  }
  if (samples.empty()) {
    ctx.err << "error: no skater with at least 2 races\n";
    return 1;
  }
  const double pooled = pooled_sigma(samples);
  if (ctx.mode == OutputMode::csv) {
    ctx.out << "skater,races,variance,sd\n";
    for (const auto& s : samples) {
      const double v = sample_variance(s);
      ctx.out << csv_field(s.skater) << ',' << s.points_per_race.size() << ',' << real(v) << ','
              << real(std::sqrt(v)) << '\n';
    }
    ctx.out << "pooled," << samples.size() << ',' << real(pooled * pooled) << ',' << real(pooled)
            << '\n';
    return 0;
  }
  ctx.out << fmt::format("{:<28} {:>5} {:>12} {:>12}\n", "skater", "races", "variance", "sd");
  for (const auto& s : samples) {
    const double v = sample_variance(s);
    ctx.out << fmt::format("{:<28} {:>5} {:>12} {:>12}\n", s.skater, s.points_per_race.size(),
                           real(v), real(std::sqrt(v)));
  }
  ctx.out << fmt::format("pooled sigma over {} skaters: {} (variance {})\n", samples.size(),
                         real(pooled), real(pooled * pooled));
  return 0;
}

struct SimulateFlags {
  std::optional<double> delta, sigma, tau, epsilon, baseline;
  std::optional<int> n_distances;
  std::optional<std::uint64_t> trials;
  std::optional<std::string> tie_rule, discretization;
  unsigned threads = 1;
};

inline int cmd_simulate(Context& ctx, const SimulateFlags& f) {
  ScenarioFile file;
  if (!ctx.config_path.empty()) file = read_scenario_file(ctx.config_path);
  TieScenario& s = file.scenario;
  if (f.delta) s.delta = *f.delta;
  if (f.sigma) s.sigma = *f.sigma;
  if (f.tau) s.tau = *f.tau;
  if (f.epsilon) s.epsilon = *f.epsilon;
  if (f.n_distances) s.n_distances = *f.n_distances;
  if (f.trials) file.n_trials = *f.trials;
  if (ctx.seed) file.seed = *ctx.seed;
  if (f.tie_rule) file.tie_rule = parse_tie_rule(*f.tie_rule);
  if (f.discretization) file.discretization = parse_discretization(*f.discretization);
  check_scenario(s);
  if (file.n_trials == 0) throw UsageError("trials must be positive");

  SimConfig cfg = file.to_sim_config();
  if (f.baseline) cfg.baseline = *f.baseline;
  cfg.workers = f.threads;
  const SimResult r = s.tau > 0 ? run_random_delta(cfg) : run(cfg);
  const double target = s.tau > 0 ? tie_prob_random_delta(s).value() : tie_prob_fixed(s).value();
  const double target_se = std::sqrt(target * (1 - target) / static_cast<double>(r.n_trials));
  const double z = target_se > 0 ? (r.p_hat - target) / target_se : 0.0;
  const char* rule = cfg.tie_rule == TieRule::window ? "window" : "exact";
  const char* disc = cfg.discretization == Discretization::none ? "none"
                     : cfg.discretization == Discretization::truncate_to_hundredths ? "truncate"
                                                                                     : "round";
  if (ctx.mode == OutputMode::csv) {
    ctx.out << "delta,sigma,tau,epsilon,n_distances,seed,n_trials,ties,p_hat,std_error,"
               "closed_form,z,tie_rule,discretization\n"
            << real(s.delta) << ',' << real(s.sigma) << ',' << real(s.tau) << ','
            << real(s.epsilon) << ',' << s.n_distances << ',' << r.seed << ',' << r.n_trials << ',' << r.ties << ',' << prob(r.p_hat) << ','
            << prob(r.std_error) << ',' << prob(target) << ',' << fmt::format("{:.3f}", z) << ','
            << rule << ',' << disc << '\n';
    return 0;
  }
  ctx.out << fmt::format("delta={} sigma={} tau={} epsilon={} n_distances={} rule={} clock={}\n",
                         real(s.delta), real(s.sigma), real(s.tau), real(s.epsilon),
                         s.n_distances, rule, disc);
  ctx.out << fmt::format("  seed {}  trials {}  ties {}\n", r.seed, r.n_trials, r.ties);
  ctx.out << fmt::format("  p_hat       = {} (std error {})\n", prob(r.p_hat), prob(r.std_error));
  ctx.out << fmt::format("  closed form = {}\n", prob(target));
  ctx.out << fmt::format("  z           = {:.3f}\n", z);
  return 0;
}

inline int cmd_table(Context& ctx, const std::string& sigmas, const std::string& taus,
                     const std::string& epsilons, double delta, int n_distances) {
  const auto sigma_grid = parse_list("--sigma", sigmas);
  const auto tau_grid = parse_list("--tau", taus);
  const auto eps_grid = parse_list("--epsilon", epsilons);
  std::vector<ProbRow> rows;
  for (double sigma : sigma_grid) {
    for (double tau : tau_grid) {
      for (double eps : eps_grid) {
        TieScenario s{delta, sigma, eps, tau, n_distances};
        check_scenario(s);
        rows.push_back(evaluate(s));
      }
    }
  }
  if (ctx.mode == OutputMode::csv) {
    ctx.out << "delta,sigma,tau,epsilon,n_distances,p_fixed,p_random,p_exact\n";
    for (const auto& r : rows) {
      ctx.out << real(r.s.delta) << ',' << real(r.s.sigma) << ',' << real(r.s.tau) << ','
              << real(r.s.epsilon) << ',' << r.s.n_distances << ',' << prob(r.fixed) << ','
              << prob(r.random) << ',' << prob(r.exact) << '\n';
    }
    return 0;
  }
  ctx.out << fmt::format("{:>8} {:>8} {:>8} {:>12} {:>12} {:>12}\n", "sigma", "tau", "epsilon",
                         "p_fixed", "p_random", "p_exact");
  for (const auto& r : rows) {
    ctx.out << fmt::format("{:>8} {:>8} {:>8} {:>12} {:>12} {:>12}\n", real(r.s.sigma),
                           real(r.s.tau), real(r.s.epsilon), prob(r.fixed), prob(r.random),
                           prob(r.exact));
  }
  return 0;
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Samalogue pointsums, tie probabilities and Monte Carlo checks"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string output = "human";
  std::optional<std::uint64_t> seed;
  std::string config;
  app.add_option("--output", output, "Output format")->check(CLI::IsMember({"human", "csv"}));
  app.add_option("--seed", seed, "Random seed for simulate");
  app.add_option("--config", config, "Scenario file (key=value)");

  auto* points = app.add_subcommand("points", "Pointsum standings from a results CSV");
  std::string results_path;
  std::string program = "500,1000,500,1000";
  points->add_option("results", results_path, "Results CSV")->required();
  points->add_option("--program", program, "Distances in order, comma separated");

  auto* required = app.add_subcommand(
      "required-time",
      "Slowest time on the last distance that ties a target pointsum (truncated points)");
  std::string target_text, own_text, precision = "hundredths";
  std::int64_t meters = 0;
  required->add_option("target", target_text, "Target pointsum, e.g. 147.195")->required();
  required->add_option("own", own_text, "Own pointsum before the last race")->required();
  required->add_option("distance", meters, "Last distance in meters")->required();
  required->add_option("--precision", precision, "Clock precision")
      ->check(CLI::IsMember({"hundredths", "thousandths"}));

  TieScenario scenario;
  auto add_scenario_flags = [&](CLI::App* sub) {
    sub->add_option("--delta", scenario.delta, "Ability gap (s, 500-m scale)");
    sub->add_option("--sigma", scenario.sigma, "Per-race sd (s, 500-m scale)");
    sub->add_option("--tau", scenario.tau, "Sd of the prior on delta");
    sub->add_option("--epsilon", scenario.epsilon, "Tie half-width (points)");
    sub->add_option("--n-distances", scenario.n_distances, "Races per pointsum");
  };
  auto* tie = app.add_subcommand("tie-prob", "Closed-form tie probabilities");
  add_scenario_flags(tie);

  auto* estimate = app.add_subcommand("estimate-sigma", "Pooled per-race sd from a results CSV");
  std::string estimate_path;
  estimate->add_option("results", estimate_path, "Results CSV")->required();

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo tie frequency");
  detail::SimulateFlags sim;
  simulate->add_option("--delta", sim.delta);
  simulate->add_option("--sigma", sim.sigma);
  simulate->add_option("--tau", sim.tau, "Prior sd on delta; > 0 draws delta per trial");
  simulate->add_option("--epsilon", sim.epsilon);
  simulate->add_option("--n-distances", sim.n_distances);
  simulate->add_option("--trials", sim.trials, "Number of simulated pairs");
  simulate->add_option("--baseline", sim.baseline, "Mean 500-m time (s)");
  simulate->add_option("--tie-rule", sim.tie_rule)->check(
      CLI::IsMember({"window", "exact", "exact_pointsum_equality"}));
  simulate->add_option("--discretization", sim.discretization)
      ->check(CLI::IsMember(
          {"none", "truncate", "round", "truncate_to_hundredths", "round_to_hundredths"}));
  simulate->add_option("--threads", sim.threads, "Worker threads (0 = all cores)");

  auto* table = app.add_subcommand("table", "CSV grid of tie probabilities");
  std::string sigmas = "0.5", taus = "0", epsilons = "0.005";
  double table_delta = 0.0;
  int table_n = 4;
  table->add_option("--sigma", sigmas, "Comma list");
  table->add_option("--tau", taus, "Comma list");
  table->add_option("--epsilon", epsilons, "Comma list");
  table->add_option("--delta", table_delta, "Ability gap (s)");
  table->add_option("--n-distances", table_n);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  detail::Context ctx{output == "csv" ? OutputMode::csv : OutputMode::human, seed, config, out,
                      err};
  try {
    if (*points) return detail::cmd_points(ctx, results_path, program);
    if (*required) return detail::cmd_required_time(ctx, target_text, own_text, meters, precision);
    if (*tie) {
      if (!config.empty()) {
        // scenario file first, explicit flags override
        TieScenario from_file = read_scenario_file(config).scenario;
        auto pick = [&](const char* flag, double& field, double file_value) {
          if (tie->count(flag) == 0) field = file_value;
        };
        pick("--delta", scenario.delta, from_file.delta);
        pick("--sigma", scenario.sigma, from_file.sigma);
        pick("--tau", scenario.tau, from_file.tau);
        pick("--epsilon", scenario.epsilon, from_file.epsilon);
        if (tie->count("--n-distances") == 0) scenario.n_distances = from_file.n_distances;
      }
      return detail::cmd_tie_prob(ctx, scenario);
    }
    if (*estimate) return detail::cmd_estimate_sigma(ctx, estimate_path);
    if (*simulate) return detail::cmd_simulate(ctx, sim);
    if (*table) return detail::cmd_table(ctx, sigmas, taus, epsilons, table_delta, table_n);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace samalog::cli
