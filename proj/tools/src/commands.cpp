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

#include "twcv/cli/commands.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>

#include "twcv/analysis.hpp"
#include "twcv/cli/csv.hpp"
#include "twcv/errors.hpp"
#include "twcv/keyrate.hpp"
#include "twcv/montecarlo.hpp"

namespace twcv::cli {
namespace {

constexpr std::array<std::string_view, 6> kCommands = {
    "keyrate", "sweep", "tolerable-noise", "surface", "max-distance", "validate"};

std::string variable_name(SweepVariable v) {
  switch (v) {
    case SweepVariable::distance: return "distance";
    case SweepVariable::gain: return "gain";
    case SweepVariable::inherent_noise: return "noise";
  }
  return "?";
}

std::string criterion_name(ToleranceCriterion c) {
  return c == ToleranceCriterion::match_unamplified ? "match_unamplified" : "positive_key";
}

std::string optional_number(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string(kMissing);
}

CommandResult keyrate(const RunConfig& config) {
  const KeyRateResult r = secret_key_rate(config.params);
  CsvWriter csv({"distance", "K", "I", "chi", "beta", "V_Ax", "V_Ax_given_B", "k"});
  const std::vector<std::string> row{
      format_number(config.params.channel.distance_km), format_number(r.key_rate),
      format_number(r.mutual_information),              format_number(r.holevo),
      format_number(r.reconciliation_efficiency),       format_number(r.alice_variance),
      format_number(r.conditional_variance),            format_number(r.k_used.k)};
  csv.add_row(row);
  return {0, csv.str(),
          {"d=" + row[0] + " km: K=" + row[1] + " I=" + row[2] + " chi=" + row[3] +
           " k=" + row[7]}};
}

CommandResult sweep_command(const RunConfig& config) {
  SweepSpec grid{config.params, config.sweep_variable, config.sweep_range,
                 config.comparison_set()};
  const auto rows = sweep(grid);
  std::vector<std::string> header{variable_name(config.sweep_variable)};
  for (const auto& c : grid.configurations) {
    for (const char* q : {".K", ".I", ".chi"}) header.push_back(c.label + q);
  }
  CsvWriter csv(header);
  for (const auto& row : rows) {
    std::vector<std::string> cells{format_number(row.value)};
    for (const auto& cell : row.cells) {
      cells.push_back(format_number(cell.key_rate));
      cells.push_back(format_number(cell.mutual_information));
      cells.push_back(format_number(cell.holevo));
    }
    csv.add_row(cells);
  }
  return {0, csv.str(),
          {std::to_string(rows.size()) + " rows x " + std::to_string(grid.configurations.size()) +
           " configurations over " + header.front()}};
}

CommandResult tolerable_noise(const RunConfig& config) {
  const double d = config.params.channel.distance_km;
  const TolerableNoise t = find_tolerable_noise(config.params, d);
  CsvWriter csv({"distance", "gain", "N_tol", "criterion", "target_K", "residual"});
  const std::vector<std::string> row{format_number(d),
                                     format_number(config.params.amplifier.gain),
                                     optional_number(t.noise),
                                     criterion_name(t.criterion),
                                     format_number(t.target_key_rate),
                                     format_number(t.residual)};
  csv.add_row(row);
  return {0, csv.str(),
          {"d=" + row[0] + " km, g=" + row[1] + ": N_tol=" + row[2] + " (" + row[3] + ")"}};
}

CommandResult surface(const RunConfig& config) {
  const auto gains = config.surface_gains.values();
  const auto distances = config.surface_distances.values();
  const NoiseSurface s = tolerable_noise_surface(config.params, gains, distances);
  CsvWriter csv({"gain", "distance", "N_tol"});
  std::vector<std::string> summary;
  std::size_t missing = 0;
  for (const auto& cell : s.cells) {
    csv.add_row(std::vector<std::string>{format_number(cell.gain), format_number(cell.distance_km),
                                         optional_number(cell.noise)});
    if (!cell.noise) ++missing;
    if (!cell.error.empty()) {
      summary.push_back("g=" + format_number(cell.gain) + " d=" + format_number(cell.distance_km) +
                        ": " + cell.error);
    }
  }
  summary.insert(summary.begin(), std::to_string(s.cells.size()) + " cells, " +
                                      std::to_string(missing) + " without a tolerable noise");
  return {0, csv.str(), std::move(summary)};
}

CommandResult max_distance(const RunConfig& config) {
  CsvWriter csv({"configuration", "max_distance_km"});
  std::vector<std::string> summary;
  for (const auto& c : config.comparison_set()) {
    std::string value(kMissing);
    try {
      value = format_number(find_max_distance(c.applied_to(config.params)));
    } catch (const BracketError& e) {
      summary.push_back(c.label + ": " + e.what());
    }
    csv.add_row(std::vector<std::string>{c.label, value});
    summary.push_back(c.label + ": " + value + " km");
  }
  return {0, csv.str(), std::move(summary)};
}

CommandResult validate(const RunConfig& config) {
  const auto checks =
      run_oracle_checks(config.params, config.seed, config.samples, config.partitions);
  CsvWriter csv({"check", "analytic", "sampled", "tolerance", "pass"});
  std::vector<std::string> summary;
  std::size_t failed = 0;
  for (const auto& c : checks) {
    const std::vector<std::string> row{c.name, format_number(c.analytic), format_number(c.sampled),
                                       format_number(c.tolerance), c.pass ? "1" : "0"};
    csv.add_row(row);
    summary.push_back(std::string(c.pass ? "PASS " : "FAIL ") + c.name + ": analytic=" + row[1] +
                      " sampled=" + row[2] + " tol=" + row[3]);
    if (!c.pass) ++failed;
  }
  summary.push_back(std::to_string(checks.size() - failed) + "/" + std::to_string(checks.size()) +
                    " checks passed");
  return {failed == 0 ? 0 : 1, csv.str(), std::move(summary)};
}

}  // namespace

std::span<const std::string_view> command_names() { return kCommands; }

CommandResult run_command(std::string_view command, const RunConfig& config) {
  using Handler = CommandResult (*)(const RunConfig&);
  static const std::map<std::string_view, Handler> handlers = {
      {"keyrate", keyrate},   {"sweep", sweep_command},         {"tolerable-noise", tolerable_noise},
      {"surface", surface},   {"max-distance", max_distance},   {"validate", validate}};
  const auto it = handlers.find(command);
  if (it == handlers.end()) {
    throw ConfigError("unknown command '" + std::string(command) + "'");
  }
  return it->second(config);
}

}  // namespace twcv::cli
