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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twcv/cli/config.hpp"

namespace twcv::cli {

struct CommandResult {
  int exit_code = 0;
  std::string csv;
  std::vector<std::string> summary;
};

/// keyrate | sweep | tolerable-noise | surface | max-distance | validate
std::span<const std::string_view> command_names();

/// Runs one command. Numeric work is delegated to the core library; this
/// layer only selects inputs and formats outputs. Library errors propagate.
CommandResult run_command(std::string_view command, const RunConfig& config);

}  // namespace twcv::cli
