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

#include "samalog/resultsio.hpp"

#include <random>
#include <sstream>

#include "gtest/gtest.h"

namespace samalog {
namespace {

const std::string kData = SAMALOG_TEST_DATA_DIR;

TEST(ParseTime, RaceTimes) {
  EXPECT_EQ(parse_time("1:12.82").value(), 72820);
  EXPECT_EQ(parse_time("1:45.006").value(), 105006);
  EXPECT_EQ(parse_time("7:21.33").value(), 441330);
  EXPECT_EQ(parse_time("37.49").value(), 37490);
  EXPECT_EQ(parse_time("41:57.63").value(), 2517630);
  EXPECT_EQ(parse_time("35.94").value(), 35940);
  EXPECT_EQ(parse_time("0.00").value(), 0);
  EXPECT_EQ(parse_time("01:05.10").value(), 65100);
}

TEST(ParseTime, ErrorsCarryPosition) {
  struct Case {
    const char* text;
    std::size_t position;
  };
  for (const Case& c : {Case{"1:60.00", 2}, Case{"1:2.00", 2}, Case{"37.4", 3}, Case{"37.4999", 3},
                        Case{"37", 2}, Case{"", 0}, Case{"123:00.00", 0}, Case{"1:12.82 ", 7},
                        Case{"-1.00", 0}, Case{"1:12:82", 4}, Case{"60.00", 0}}) {
    try {
      parse_time(c.text);
      ADD_FAILURE() << "accepted " << c.text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.position(), c.position) << c.text << ": " << e.what();
    }
  }
}

TEST(FormatTime, Canonical) {
  EXPECT_EQ(format_time(MilliTime(72820), Precision::hundredths), "1:12.82");
  EXPECT_EQ(format_time(MilliTime(105006), Precision::thousandths), "1:45.006");
  EXPECT_EQ(format_time(MilliTime(0), Precision::hundredths), "0.00");
  EXPECT_EQ(format_time(MilliTime(37490), Precision::hundredths), "37.49");
  EXPECT_EQ(format_time(MilliTime(65100), Precision::hundredths), "1:05.10");
  EXPECT_EQ(format_time(MilliTime(2517630), Precision::hundredths), "41:57.63");
  EXPECT_THROW(format_time(MilliTime(105006), Precision::hundredths), PrecisionError);
}

TEST(FormatTime, RoundTripsAtBothPrecisions) {
  std::mt19937_64 rng(35);
  std::uniform_int_distribution<std::int64_t> ms(0, 99 * 60000 + 59999);
  for (int i = 0; i < 20000; ++i) {
    const MilliTime t(ms(rng));
    ASSERT_EQ(parse_time(format_time(t, Precision::thousandths)), t);
    const MilliTime c(t.value() / 10 * 10);
    ASSERT_EQ(parse_time(format_time(c, Precision::hundredths)), c);
  }
}

TEST(ParseTime, NeverCrashesOnArbitraryBytes) {
  std::mt19937_64 rng(1980);
  std::uniform_int_distribution<int> len(0, 12), byte(0, 255), pick(0, 5);
  const std::string alphabet = "0123456789:.";
  int parsed = 0;
  for (int i = 0; i < 200000; ++i) {
    std::string s(static_cast<std::size_t>(len(rng)), '\0');
    for (auto& ch : s) {
      ch = pick(rng) == 0 ? static_cast<char>(byte(rng))
                          : alphabet[static_cast<std::size_t>(byte(rng)) % alphabet.size()];
    }
    try {
      const MilliTime t = parse_time(s);
      ASSERT_GE(t.value(), 0);
      ++parsed;
    } catch (const ParseError& e) {
      ASSERT_LE(e.position(), s.size());
    }
  }
  EXPECT_GT(parsed, 0);
}

TEST(Points, ParseAndFormat) {
  EXPECT_EQ(parse_points("147.195").value(), 147195);
  EXPECT_EQ(parse_points("110.66").value(), 110660);
  EXPECT_EQ(parse_points("100").value(), 100000);
  EXPECT_THROW(parse_points("1.2345"), ParseError);
  EXPECT_THROW(parse_points("-1"), ParseError);
  EXPECT_EQ(format_points(MilliPoints(73900)), "73.900");
  EXPECT_EQ(format_points(-190), "-0.190");
}

TEST(ParseProgram, Lists) {
  EXPECT_EQ(parse_program("500,1000,500,1000").size(), 4u);
  EXPECT_THROW(parse_program(""), ParseError);
  EXPECT_THROW(parse_program("500,,1000"), ParseError);
  EXPECT_THROW(parse_program("0"), ParseError);
}

TEST(ReadResults, BerlinListing) {
  const auto rows = read_results_file(kData + "/berlin_500.csv");
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].skater, "An Liu");
  EXPECT_EQ(rows[1].skater, "An Liu");
  EXPECT_EQ(rows[3].skater, "Xuefeng Sun");
  EXPECT_EQ(rows[2].time, rows[3].time);
  EXPECT_EQ(rows[0].time.value(), 35940);
}

TEST(ReadResults, SprintFixtureReproducesTie) {
  const auto rows = read_results_file(kData + "/allan_odin.csv");
  ASSERT_EQ(rows.size(), 8u);
  EXPECT_EQ(rows[4].session, "Saturday");
  const std::span<const RaceResult> all(rows);
  EXPECT_EQ(pointsum(all.first(4), Program::sprint()).value(), 147195);
  EXPECT_EQ(pointsum(all.subspan(4), Program::sprint()).value(), 147195);
}

TEST(ReadResults, EmptyInputs) {
  EXPECT_TRUE(read_results_file(kData + "/header_only.csv").empty());
  std::istringstream nothing("");
  EXPECT_TRUE(read_results(nothing).empty());
}

TEST(ReadResults, ErrorsNameLineAndColumn) {
  std::istringstream bad_time("skater,distance_m,time\nA,500,37.49\nB,500,37.4\n");
  try {
    read_results(bad_time);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("line 3, column 3"), std::string::npos) << e.what();
  }
  std::istringstream bad_distance("skater,distance_m,time\nA,five,37.49\n");
  EXPECT_THROW(read_results(bad_distance), ParseError);
  std::istringstream no_header("A,500,37.49\n");
  EXPECT_THROW(read_results(no_header), ParseError);
  std::istringstream short_row("skater,distance_m,time\nA,500\n");
  EXPECT_THROW(read_results(short_row), ParseError);
}

TEST(ReadResults, QuotedFields) {
  std::istringstream in("skater,distance_m,time\n\"Smith, \"\"Jr\"\"\",500,36.00\n");
  const auto rows = read_results(in);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].skater, "Smith, \"Jr\"");
}

TEST(ReadResults, PreservesRowCountAndOrder) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> cs(3000, 9000);
  std::ostringstream csv;
  csv << "skater,distance_m,time\n";
  std::vector<int> times;
  for (int i = 0; i < 500; ++i) {
    times.push_back(cs(rng));
    csv << "S" << i << ",500," << format_time(MilliTime(CentiTime(times.back())), Precision::hundredths)
        << (i % 2 ? "\r\n" : "\n");
  }
  std::istringstream in(csv.str());
  const auto rows = read_results(in);
  ASSERT_EQ(rows.size(), times.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ASSERT_EQ(rows[i].skater, "S" + std::to_string(i));
    ASSERT_EQ(rows[i].time.value(), times[i] * 10);
  }
}

TEST(ReadScenario, Defaults) {
  std::istringstream in("sigma=0.5\nepsilon=0.005\n");
  const ScenarioFile f = read_scenario(in);
  EXPECT_EQ(f.scenario.delta, 0.0);
  EXPECT_EQ(f.scenario.tau, 0.0);
  EXPECT_EQ(f.scenario.n_distances, 4);
  EXPECT_EQ(f.discretization, Discretization::truncate_to_hundredths);
  EXPECT_EQ(f.tie_rule, TieRule::window);
}

TEST(ReadScenario, RandomDeltaCase) {
  std::istringstream in("# gap prior\nsigma=0.5\ntau = 0.25  # quarter second\nepsilon=0.005\n"
                        "tie_rule=exact\ndiscretization=round\nseed=9\nn_trials=10\n");
  const ScenarioFile f = read_scenario(in);
  EXPECT_EQ(f.scenario.tau, 0.25);
  EXPECT_NEAR(tie_prob_random_delta(f.scenario).value(), 0.00230, 5e-6);
  EXPECT_EQ(f.tie_rule, TieRule::exact_pointsum_equality);
  EXPECT_EQ(f.discretization, Discretization::round_to_hundredths);
  EXPECT_EQ(f.to_sim_config().seed, 9u);
  EXPECT_EQ(f.to_sim_config().program.size(), 4u);
}

TEST(ReadScenario, ErrorsNameTheKey) {
  auto key_of = [](const char* text) -> std::string {
    std::istringstream in(text);
    try {
      read_scenario(in);
    } catch (const ScenarioError& e) {
      return e.key();
    }
    return "";
  };
  EXPECT_EQ(key_of("sigma=-1"), "sigma");
  EXPECT_EQ(key_of("epsilon=0"), "epsilon");
  EXPECT_EQ(key_of("tau=abc"), "tau");
  EXPECT_EQ(key_of("colour=blue"), "colour");
  EXPECT_EQ(key_of("n_trials=0"), "n_trials");
  EXPECT_EQ(key_of("discretization=ceil"), "discretization");
  EXPECT_EQ(key_of("n_distances=-2"), "n_distances");
  std::istringstream no_equals("sigma 0.5");
  EXPECT_THROW(read_scenario(no_equals), ParseError);
}

}  // namespace
}  // namespace samalog
