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

namespace twcv::cli {

/// Literal written for absent values.
inline constexpr std::string_view kMissing = "NA";

/// 12 significant digits, scientific notation, '.' as decimal point
/// regardless of the global locale.
std::string format_number(double value);

/// Accumulates a CSV document with a fixed header.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  std::size_t column_count() const noexcept { return columns_; }
  /// Throws std::invalid_argument when the cell count differs from the header.
  void add_row(std::span<const std::string> cells);

  const std::string& str() const noexcept { return text_; }

 private:
  void write_line(std::span<const std::string> cells);

  std::size_t columns_;
  std::string text_;
};

}  // namespace twcv::cli
