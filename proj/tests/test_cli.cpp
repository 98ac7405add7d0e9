// Copyright 2026 The twcv Authors
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

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "twcv/analysis.hpp"
#include "twcv/cli/commands.hpp"
#include "twcv/cli/config.hpp"
#include "twcv/cli/csv.hpp"
#include "twcv/keyrate.hpp"
#include "twcv/montecarlo.hpp"

namespace twcv::cli {
namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream cells_in(line);
    std::string cell;
    while (std::getline(cells_in, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

bool mentions(const std::vector<std::string>& lines, const std::string& needle) {
  return std::any_of(lines.begin(), lines.end(),
                     [&](const std::string& l) { return l.find(needle) != std::string::npos; });
}

std::string error_of(std::string_view text, std::vector<Override> overrides = {}) {
  try {
    parse_config_text(text, overrides);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

TEST(Format, TwelveSignificantDigits) {
  EXPECT_EQ(format_number(0.1), "1.00000000000e-01");
  EXPECT_EQ(format_number(-63.13), "-6.31300000000e+01");
  EXPECT_EQ(format_number(0.0), "0.00000000000e+00");
  EXPECT_EQ(format_number(std::nan("")), "NA");
}

TEST(Csv, HeaderAndRows) {
  CsvWriter w({"a", "b"});
  w.add_row(std::vector<std::string>{"1", "2"});
  EXPECT_EQ(w.str(), "a,b\n1,2\n");
  EXPECT_THROW(w.add_row(std::vector<std::string>{"1"}), std::invalid_argument);
}

TEST(Config, EmptyTextGivesDefaults) {
  const RunConfig c = parse_config_text("");
  EXPECT_EQ(c.params.alice_variance, 40.0);
  EXPECT_EQ(c.params.bob_variance, 40.0);
  EXPECT_EQ(c.params.reconciliation_efficiency, 0.948);
  EXPECT_EQ(c.params.detector.efficiency, 0.552);
  EXPECT_EQ(c.params.detector.electronic_noise, 0.015);
  EXPECT_EQ(c.params.alice_transmittance, 0.4);
  EXPECT_EQ(c.params.channel.excess_noise, 0.02);
  EXPECT_EQ(parse_config(std::nullopt).params.alice_variance, 40.0);
}

TEST(Config, ReadsSections) {
  const RunConfig c = parse_config_text(
      "# comment\n[channel]\ndistance = 60\nepsilon = 0.005\n"
      "[detector]\nkind = homodyne\n[amplifier]\nkind = psa\ngain = 15\n"
      "[sweep]\nvariable = gain\nstart = 1\nstop = 20\nstep = 0.5\n"
      "[montecarlo]\nseed = 9\nsamples = 1000\npartitions = 4\n[output]\npath = x.csv\n");
  EXPECT_EQ(c.params.channel.distance_km, 60.0);
  EXPECT_EQ(c.params.channel.excess_noise, 0.005);
  EXPECT_EQ(c.params.detector.kind, DetectionKind::homodyne);
  EXPECT_EQ(c.params.amplifier.kind, AmplifierKind::psa);
  EXPECT_EQ(c.params.amplifier.gain, 15.0);
  EXPECT_EQ(c.sweep_variable, SweepVariable::gain);
  EXPECT_EQ(c.sweep_range.step, 0.5);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.samples, 1000u);
  EXPECT_EQ(c.partitions, 4u);
  EXPECT_EQ(c.output_path, "x.csv");
}

TEST(Config, RangeErrorNamesKeyAndConstraint) {
  const std::string e = error_of("[detector]\neta = 1.2\n");
  EXPECT_NE(e.find("detector.eta"), std::string::npos) << e;
  EXPECT_NE(e.find("(0, 1]"), std::string::npos) << e;
}

TEST(Config, UnknownKeyIsAnError) {
  EXPECT_NE(error_of("[channel]\nlength = 3\n").find("channel.length: unknown key"),
            std::string::npos);
  EXPECT_NE(error_of("", {{"nosuch.key", "1"}}).find("nosuch.key"), std::string::npos);
}

TEST(Config, TypeMismatchIsAnError) {
  EXPECT_NE(error_of("[channel]\ndistance = far\n").find("channel.distance"), std::string::npos);
  EXPECT_NE(error_of("[montecarlo]\nseed = -1\n").find("montecarlo.seed"), std::string::npos);
  EXPECT_NE(error_of("[detector]\nkind = balanced\n").find("homodyne|heterodyne"),
            std::string::npos);
}

TEST(Config, CrossFieldConstraints) {
  EXPECT_NE(error_of("[amplifier]\nkind = psa\n").find("inconsistent"), std::string::npos);
  EXPECT_NE(error_of("[sweep]\nstart = 5\nstop = 1\n").find("sweep"), std::string::npos);
}

TEST(Config, OverrideBeatsFile) {
  const std::vector<Override> o{parse_override("channel.epsilon=0.2")};
  const RunConfig c = parse_config_text("[channel]\nepsilon = 0.005\n", o);
  EXPECT_EQ(c.params.channel.excess_noise, 0.2);
  EXPECT_THROW(parse_override("no_equals"), ConfigError);
}

TEST(Config, ComparisonSet) {
  const RunConfig c = parse_config_text(
      "[detector]\nkind = homodyne\n[configs]\nbare = kind=none\n"
      "psa_g15 = kind=psa gain=15\nideal = kind=none eta=1 v_el=0\n");
  ASSERT_EQ(c.configurations.size(), 3u);
  EXPECT_EQ(c.configurations[1].label, "psa_g15");
  EXPECT_EQ(c.configurations[1].amplifier.gain, 15.0);
  EXPECT_EQ(c.configurations[2].efficiency, 1.0);
  EXPECT_EQ(parse_config_text("").comparison_set().size(), 6u);
  EXPECT_NE(error_of("[configs]\nx = kind=psa colour=red\n").find("configs.x.colour"),
            std::string::npos);
}

TEST(Config, MissingFile) {
  EXPECT_THROW(parse_config(std::filesystem::path("/nonexistent/twcv.ini")), ConfigError);
}

TEST(Config, KnownKeysDocumented) {
  const auto keys = known_keys();
  EXPECT_NE(std::find(keys.begin(), keys.end(), "detector.eta"), keys.end());
  EXPECT_NE(std::find(keys.begin(), keys.end(), "configs.<label>"), keys.end());
}

TEST(Commands, UnknownCommand) {
  EXPECT_THROW(run_command("plot", parse_config_text("")), ConfigError);
  EXPECT_EQ(command_names().size(), 6u);
}

TEST(Commands, KeyrateEqualsLibrary) {
  const RunConfig c = parse_config_text("[channel]\ndistance = 33\n");
  const auto rows = parse_csv(run_command("keyrate", c).csv);
  ASSERT_EQ(rows.size(), 2u);
  const auto r = secret_key_rate(c.params);
  EXPECT_EQ(rows[1][1], format_number(r.key_rate));
  EXPECT_EQ(rows[1][2], format_number(r.mutual_information));
  EXPECT_EQ(rows[1][3], format_number(r.holevo));
  EXPECT_EQ(rows[1][7], format_number(r.k_used.k));
}

TEST(Commands, SweepShape) {
  const RunConfig c = parse_config_text("[detector]\nkind = homodyne\n");
  const auto rows = parse_csv(run_command("sweep", c).csv);
  ASSERT_EQ(rows.size(), 81u);
  EXPECT_EQ(rows[0].size(), 13u);
  EXPECT_EQ(rows[0][0], "distance");
  EXPECT_EQ(rows[0][4], "psa_g2.K");
  for (const auto& r : rows) EXPECT_EQ(r.size(), 13u);
}

TEST(Commands, SweepEqualsLibrary) {
  const RunConfig c = parse_config_text("[sweep]\nstart = 10\nstop = 70\nstep = 20\n");
  const auto rows = parse_csv(run_command("sweep", c).csv);
  const auto lib = sweep(SweepSpec{c.params, c.sweep_variable, c.sweep_range, c.comparison_set()});
  ASSERT_EQ(rows.size(), lib.size() + 1);
  for (std::size_t i = 0; i < lib.size(); ++i) {
    EXPECT_EQ(rows[i + 1][0], format_number(lib[i].value));
    for (std::size_t j = 0; j < lib[i].cells.size(); ++j) {
      EXPECT_EQ(rows[i + 1][1 + 3 * j], format_number(lib[i].cells[j].key_rate));
    }
  }
}

TEST(Commands, Deterministic) {
  const RunConfig c = parse_config_text("[sweep]\nstop = 20\n");
  EXPECT_EQ(run_command("sweep", c).csv, run_command("sweep", c).csv);
  const RunConfig v = parse_config_text("[montecarlo]\nsamples = 20000\npartitions = 2\n");
  EXPECT_EQ(run_command("validate", v).csv, run_command("validate", v).csv);
}

TEST(Commands, TolerableNoiseSummary) {
  const RunConfig c = parse_config_text(
      "[amplifier]\nkind = pia\ngain = 15\n[channel]\ndistance = 60\nepsilon = 0.02\n");
  const auto result = run_command("tolerable-noise", c);
  const auto rows = parse_csv(result.csv);
  const auto lib = find_tolerable_noise(c.params, 60.0);
  ASSERT_TRUE(lib.noise);
  EXPECT_EQ(rows[1][2], format_number(*lib.noise));
  EXPECT_TRUE(mentions(result.summary, "N_tol=" + format_number(*lib.noise)));
  EXPECT_NEAR(std::stod(rows[1][2]), 2.678, 0.01);
}

TEST(Commands, SurfaceMarksMissingCells) {
  const RunConfig c = parse_config_text(
      "[amplifier]\nkind = pia\ngain = 2\n[surface]\ngain_start = 2\ngain_stop = 3\n"
      "distance_start = 30\ndistance_stop = 90\ndistance_step = 60\n");
  const auto rows = parse_csv(run_command("surface", c).csv);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"gain", "distance", "N_tol"}));
  EXPECT_NE(rows[1][2], "NA");
  EXPECT_EQ(rows[2][2], "NA");
}

TEST(Commands, MaxDistanceEqualsLibrary) {
  const RunConfig c = parse_config_text("[configs]\nnone = kind=none\n");
  const auto rows = parse_csv(run_command("max-distance", c).csv);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][0], "none");
  EXPECT_EQ(rows[1][1], format_number(find_max_distance(c.params)));
}

TEST(Commands, ValidateReportsEveryCheck) {
  const RunConfig c = parse_config_text("[montecarlo]\nsamples = 200000\n");
  const auto result = run_command("validate", c);
  const auto rows = parse_csv(result.csv);
  const auto checks = run_oracle_checks(c.params, c.seed, c.samples, c.partitions);
  ASSERT_EQ(rows.size(), checks.size() + 1);
  EXPECT_EQ(result.exit_code, std::all_of(checks.begin(), checks.end(),
                                          [](const auto& k) { return k.pass; })
                                  ? 0
                                  : 1);
  EXPECT_TRUE(mentions(result.summary, "checks passed"));
}

}  // namespace
}  // namespace twcv::cli
