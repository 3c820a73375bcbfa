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

// Text formats: official time strings, results CSV, scenario key=value files.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "samalog/error.hpp"
#include "samalog/mcsim.hpp"
#include "samalog/samalogue.hpp"
#include "samalog/tieprob.hpp"

namespace samalog {

namespace detail {

inline bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }

inline std::string_view trim(std::string_view s) noexcept {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

// Reads a run of 1..max_digits digits starting at `pos`.
inline std::int64_t read_digits(std::string_view text, std::size_t& pos, std::size_t min_digits,
                                std::size_t max_digits, const char* what) {
  const std::size_t start = pos;
  std::int64_t v = 0;
  while (pos < text.size() && is_digit(text[pos]) && pos - start < max_digits) {
    v = v * 10 + (text[pos] - '0');
    ++pos;
  }
  const std::size_t n = pos - start;
  if (n < min_digits || (pos < text.size() && is_digit(text[pos]))) {
    throw ParseError(std::string("expected ") + std::to_string(min_digits) +
                         (min_digits == max_digits ? "" : "-" + std::to_string(max_digits)) +
                         " digits for " + what + " at position " + std::to_string(start),
                     start);
  }
  return v;
}

inline void expect_char(std::string_view text, std::size_t pos, char c) {
  if (pos >= text.size() || text[pos] != c) {
    throw ParseError(std::string("expected '") + c + "' at position " + std::to_string(pos), pos);
  }
}

}  // namespace detail

/// Parses "ss.cc", "m:ss.cc", "mm:ss.cc", each with two or three decimals.
/// Without a minutes field the seconds take one or two digits.
inline MilliTime parse_time(std::string_view text) {
  std::size_t pos = 0;
  std::int64_t minutes = 0;
  std::int64_t seconds = 0;
  const std::size_t colon = text.find(':');
  if (colon != std::string_view::npos) {
    minutes = detail::read_digits(text, pos, 1, 2, "minutes");
    detail::expect_char(text, pos, ':');
    ++pos;
    seconds = detail::read_digits(text, pos, 2, 2, "seconds");
  } else {
    seconds = detail::read_digits(text, pos, 1, 2, "seconds");
  }
  if (seconds >= 60) throw ParseError("seconds must be below 60", pos - 2);
  detail::expect_char(text, pos, '.');
  ++pos;
  const std::size_t frac_start = pos;
  const std::int64_t frac = detail::read_digits(text, pos, 2, 3, "decimals");
  if (pos != text.size())
    throw ParseError("trailing characters at position " + std::to_string(pos), pos);
  const std::int64_t frac_ms = pos - frac_start == 2 ? frac * 10 : frac;
  return MilliTime(minutes * 60000 + seconds * 1000 + frac_ms);
}

/// Canonical time string: "s.cc" below one minute, "m:ss.cc" above.
/// At hundredths precision a nonzero thousandth digit is a PrecisionError.
inline std::string format_time(MilliTime t, Precision precision) {
  const std::int64_t ms = t.value();
  if (precision == Precision::hundredths && ms % 10 != 0)
    throw PrecisionError("time has a nonzero thousandth; format at thousandths");
  const std::int64_t minutes = ms / 60000;
  if (minutes > 99) throw DomainError("times of 100 minutes or more are not supported");
  const std::int64_t seconds = ms / 1000 % 60;
  const std::int64_t frac = ms % 1000;
  char buf[32];
  const int frac_digits = precision == Precision::hundredths ? 2 : 3;
  const long long frac_shown = precision == Precision::hundredths ? frac / 10 : frac;
  if (minutes > 0) {
    std::snprintf(buf, sizeof buf, "%lld:%02lld.%0*lld", static_cast<long long>(minutes),
                  static_cast<long long>(seconds), frac_digits, frac_shown);
  } else {
    std::snprintf(buf, sizeof buf, "%lld.%0*lld", static_cast<long long>(seconds), frac_digits,
                  frac_shown);
  }
  return buf;
}

/// Parses a nonnegative points value with up to three decimals ("147.195").
inline MilliPoints parse_points(std::string_view text) {
  std::size_t pos = 0;
  const std::int64_t whole = detail::read_digits(text, pos, 1, 12, "points");
  std::int64_t frac = 0;
  if (pos < text.size()) {
    detail::expect_char(text, pos, '.');
    ++pos;
    const std::size_t start = pos;
    frac = detail::read_digits(text, pos, 1, 3, "point decimals");
    for (std::size_t i = pos - start; i < 3; ++i) frac *= 10;
    if (pos != text.size())
      throw ParseError("trailing characters at position " + std::to_string(pos), pos);
  }
  return MilliPoints(whole * 1000 + frac);
}

inline std::string format_points(std::int64_t milli) {
  char buf[40];
  const char* sign = milli < 0 ? "-" : "";
  const unsigned long long mag =
      milli < 0 ? 0ULL - static_cast<unsigned long long>(milli) : static_cast<unsigned long long>(milli);
  std::snprintf(buf, sizeof buf, "%s%llu.%03llu", sign, mag / 1000, mag % 1000);
  return buf;
}

inline std::string format_points(MilliPoints p) { return format_points(p.value()); }

/// "500,1000,500,1000" -> Program.
inline Program parse_program(std::string_view text) {
  std::vector<Distance> d;
  std::size_t pos = 0;
  while (true) {
    const std::size_t start = pos;
    const std::int64_t m = detail::read_digits(text, pos, 1, 6, "distance");
    if (m <= 0) throw ParseError("distance must be positive", start);
    d.emplace_back(m);
    if (pos == text.size()) break;
    detail::expect_char(text, pos, ',');
    ++pos;
  }
  return Program(std::move(d));
}

namespace detail {

// Splits one CSV record into fields (RFC 4180 quoting, no embedded newlines).
// Returns the byte offset of each field for error reporting.
inline std::vector<std::pair<std::string, std::size_t>> split_csv(std::string_view line,
                                                                  std::size_t line_no) {
  std::vector<std::pair<std::string, std::size_t>> fields;
  std::size_t i = 0;
  while (true) {
    std::string field;
    const std::size_t start = i;
    if (i < line.size() && line[i] == '"') {
      ++i;
      while (true) {
        if (i >= line.size())
          throw ParseError("line " + std::to_string(line_no) + ": unterminated quote", start,
                           line_no);
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            field += '"';
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        field += line[i++];
      }
      if (i < line.size() && line[i] != ',')
        throw ParseError("line " + std::to_string(line_no) + ", column " +
                             std::to_string(i + 1) + ": text after closing quote",
                         i, line_no);
    } else {
      while (i < line.size() && line[i] != ',') field += line[i++];
    }
    fields.emplace_back(std::move(field), start);
    if (i >= line.size()) break;
    ++i;  // comma
  }
  return fields;
}

}  // namespace detail

/// Reads "skater,distance_m,time[,session]" with a mandatory header row.
/// Empty input (or a header alone) yields an empty list.
inline std::vector<RaceResult> read_results(std::istream& in) {
  std::vector<RaceResult> out;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  bool has_session = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    auto fields = detail::split_csv(line, line_no);
    if (!have_header) {
      std::vector<std::string> names;
      for (auto& [f, _] : fields) names.emplace_back(detail::trim(f));
      const bool base = names.size() >= 3 && names[0] == "skater" && names[1] == "distance_m" &&
                        names[2] == "time";
      has_session = names.size() == 4 && names[3] == "session";
      if (!base || (names.size() != 3 && !has_session)) {
        throw ParseError("line " + std::to_string(line_no) +
                             ": header must be skater,distance_m,time[,session]",
                         0, line_no);
      }
      have_header = true;
      continue;
    }
    const std::size_t expected = has_session ? 4 : 3;
    if (fields.size() != expected) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                           std::to_string(expected) + " columns, found " +
                           std::to_string(fields.size()),
                       0, line_no);
    }
    auto column_error = [&](std::size_t col, const std::string& msg) {
      return ParseError("line " + std::to_string(line_no) + ", column " + std::to_string(col) +
                            ": " + msg,
                        fields[col - 1].second, line_no);
    };
    const std::string_view name = detail::trim(fields[0].first);
    if (name.empty()) throw column_error(1, "empty skater name");

    const std::string_view dist_text = detail::trim(fields[1].first);
    std::int64_t meters = 0;
    const auto [ptr, ec] =
        std::from_chars(dist_text.data(), dist_text.data() + dist_text.size(), meters);
    if (ec != std::errc{} || ptr != dist_text.data() + dist_text.size() || meters <= 0)
      throw column_error(2, "distance_m must be a positive integer");

    MilliTime time;
    try {
      time = parse_time(detail::trim(fields[2].first));
    } catch (const ParseError& e) {
      throw column_error(3, e.what());
    }
    if (time.value() <= 0) throw column_error(3, "time must be positive");

    out.push_back(RaceResult{std::string(name), Distance(meters), time,
                             has_session ? std::string(detail::trim(fields[3].first)) : ""});
  }
  return out;
}

inline std::vector<RaceResult> read_results_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open results file " + path);
  return read_results(in);
}

/// Everything a scenario file can set.
struct ScenarioFile {
  TieScenario scenario;
  std::uint64_t n_trials = 1'000'000;
  std::uint64_t seed = 42;
  Discretization discretization = Discretization::truncate_to_hundredths;
  TieRule tie_rule = TieRule::window;

  SimConfig to_sim_config() const {
    SimConfig c;
    c.scenario = scenario;
    c.program = Program::alternating_sprint(scenario.n_distances);
    c.n_trials = n_trials;
    c.seed = seed;
    c.discretization = discretization;
    c.tie_rule = tie_rule;
    return c;
  }
};

/// Thrown for scenario problems; `key()` names the offending key.
class ScenarioError : public ValidationError {
 public:
  ScenarioError(const std::string& key, const std::string& what)
      : ValidationError(key + ": " + what), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

inline Discretization parse_discretization(std::string_view v) {
  if (v == "none") return Discretization::none;
  if (v == "truncate" || v == "truncate_to_hundredths") return Discretization::truncate_to_hundredths;
  if (v == "round" || v == "round_to_hundredths") return Discretization::round_to_hundredths;
  throw ScenarioError("discretization", "expected none, truncate or round");
}

inline TieRule parse_tie_rule(std::string_view v) {
  if (v == "window") return TieRule::window;
  if (v == "exact" || v == "exact_pointsum_equality") return TieRule::exact_pointsum_equality;
  throw ScenarioError("tie_rule", "expected window or exact");
}

namespace detail {

inline double scenario_real(const std::string& key, std::string_view v) {
  const std::string s(v);
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ScenarioError(key, "not a number: '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(out)) throw ScenarioError(key, "not a number: '" + s + "'");
  return out;
}

inline std::uint64_t scenario_uint(const std::string& key, std::string_view v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty())
    throw ScenarioError(key, "not a nonnegative integer: '" + std::string(v) + "'");
  return out;
}

}  // namespace detail

/// Reads key=value lines. Keys: delta, sigma, tau, epsilon, n_distances,
/// n_trials, seed, discretization, tie_rule. '#' starts a comment.
/// Defaults: delta=0, sigma=0.5, tau=0, epsilon=0.005, n_distances=4,
/// n_trials=1000000, seed=42, discretization=truncate, tie_rule=window.
inline ScenarioFile read_scenario(std::istream& in) {
  ScenarioFile f;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string_view body = detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("line " + std::to_string(line_no) + ": expected key=value", 0, line_no);
    const std::string key(detail::trim(body.substr(0, eq)));
    const std::string_view value = detail::trim(body.substr(eq + 1));

    if (key == "delta") {
      f.scenario.delta = detail::scenario_real(key, value);
    } else if (key == "sigma") {
      f.scenario.sigma = detail::scenario_real(key, value);
    } else if (key == "tau") {
      f.scenario.tau = detail::scenario_real(key, value);
    } else if (key == "epsilon") {
      f.scenario.epsilon = detail::scenario_real(key, value);
    } else if (key == "n_distances") {
      const auto n = detail::scenario_uint(key, value);
      if (n > 1000) throw ScenarioError(key, "must be at most 1000");
      f.scenario.n_distances = static_cast<int>(n);
    } else if (key == "n_trials") {
      f.n_trials = detail::scenario_uint(key, value);
    } else if (key == "seed") {
      f.seed = detail::scenario_uint(key, value);
    } else if (key == "discretization") {
      f.discretization = parse_discretization(value);
    } else if (key == "tie_rule") {
      f.tie_rule = parse_tie_rule(value);
    } else {
      throw ScenarioError(key, "unknown key");
    }
  }

  const TieScenario& s = f.scenario;
  if (!(s.sigma > 0.0)) throw ScenarioError("sigma", "must be positive");
  if (!(s.epsilon > 0.0)) throw ScenarioError("epsilon", "must be positive");
  if (!(s.tau >= 0.0)) throw ScenarioError("tau", "must be nonnegative");
  if (s.n_distances < 1) throw ScenarioError("n_distances", "must be at least 1");
  if (f.n_trials == 0) throw ScenarioError("n_trials", "must be positive");
  return f;
}

inline ScenarioFile read_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file " + path);
  return read_scenario(in);
}

}  // namespace samalog
