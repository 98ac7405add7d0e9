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

#pragma once

// Run configuration for the command-line tool.
//
// The configuration file is INI-style text: `[section]` headers followed by
// `key = value` lines; `;` starts a comment. Every key is validated against a
// closed schema (see README). Values resolve in the order built-in defaults,
// then file, then flag overrides.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "twcv/analysis.hpp"
#include "twcv/errors.hpp"
#include "twcv/protocol.hpp"

namespace twcv::cli {

/// Invalid configuration; the message names the key and the constraint.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  ProtocolParams params;
  SweepVariable sweep_variable = SweepVariable::distance;
  Range sweep_range{1.0, 80.0, 1.0};
  Range surface_gains{2.0, 15.0, 1.0};
  Range surface_distances{1.0, 75.0, 1.0};
  std::uint64_t seed = 20140101;
  std::size_t samples = 1000000;
  unsigned partitions = 1;
  std::string output_path;
  /// Comparison set for sweep and max-distance. Empty means the defaults for
  /// the configured detector kind.
  std::vector<Configuration> configurations;

  std::vector<Configuration> comparison_set() const;
};

using Override = std::pair<std::string, std::string>;

/// Splits "KEY=VALUE". Throws ConfigError when '=' is missing.
Override parse_override(std::string_view assignment);

RunConfig parse_config_text(std::string_view text, std::span<const Override> overrides = {});
RunConfig parse_config(const std::optional<std::filesystem::path>& file,
                       std::span<const Override> overrides = {});

/// Parses a configuration entry such as "kind=pia gain=15 noise=1.5".
Configuration parse_configuration(std::string label, std::string_view fields);

/// Every accepted "section.key"; `configs.<label>` entries are open-ended.
std::span<const std::string_view> known_keys();

}  // namespace twcv::cli
