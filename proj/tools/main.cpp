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

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "twcv/cli/commands.hpp"
#include "twcv/cli/config.hpp"

int main(int argc, char** argv) {
  using namespace twcv::cli;

  CLI::App app{"Secret key rates of two-way CV-QKD with optical amplifiers"};
  app.set_version_flag("--version", "twcv 0.1.0");

  std::string command;
  std::optional<std::string> config_path;
  std::optional<std::string> out_path;
  std::vector<std::string> assignments;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> samples;

  const auto names = command_names();
  app.add_option("command", command, "keyrate | sweep | tolerable-noise | surface | max-distance | validate")
      ->required()
      ->check(CLI::IsMember(std::vector<std::string>(names.begin(), names.end())));
  app.add_option("--config", config_path, "Sectioned key=value configuration file")
      ->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "CSV output path (default twcv_<command>.csv)");
  app.add_option("--set", assignments, "Override one key, e.g. --set channel.epsilon=0.005")
      ->take_all();
  app.add_option("--seed", seed, "Monte Carlo seed");
  app.add_option("--samples", samples, "Monte Carlo sample count");

  CLI11_PARSE(app, argc, argv);

  try {
    std::vector<Override> overrides;
    for (const auto& a : assignments) overrides.push_back(parse_override(a));
    if (seed) overrides.emplace_back("montecarlo.seed", std::to_string(*seed));
    if (samples) overrides.emplace_back("montecarlo.samples", std::to_string(*samples));
    if (out_path) overrides.emplace_back("output.path", *out_path);

    std::optional<std::filesystem::path> file;
    if (config_path) file = *config_path;
    const RunConfig config = parse_config(file, overrides);

    const CommandResult result = run_command(command, config);
    const std::string path =
        config.output_path.empty() ? "twcv_" + command + ".csv" : config.output_path;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << result.csv;
    out.close();
    if (!out) {
      std::cerr << "error: cannot write '" << path << "'\n";
      return 2;
    }
    for (const auto& line : result.summary) std::cout << line << '\n';
    std::cout << "wrote " << path << '\n';
    return result.exit_code;
  } catch (const twcv::SingularityError& e) {
    std::cerr << "error: singular parameters: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
