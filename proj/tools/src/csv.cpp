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

#include "twcv/cli/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace twcv::cli {

std::string format_number(double value) {
  if (!std::isfinite(value)) return std::string(kMissing);
  std::array<char, 64> buffer{};
  const auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value,
                                       std::chars_format::scientific, 11);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buffer.data(), ptr);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  if (header.empty()) throw std::invalid_argument("CSV header must not be empty");
  write_line(header);
}

void CsvWriter::add_row(std::span<const std::string> cells) {
  if (cells.size() != columns_) {
    throw std::invalid_argument("CSV row has " + std::to_string(cells.size()) +
                                " cells, header has " + std::to_string(columns_));
  }
  write_line(cells);
}

void CsvWriter::write_line(std::span<const std::string> cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i != 0) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
}

}  // namespace twcv::cli
