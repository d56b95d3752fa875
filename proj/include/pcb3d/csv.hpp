// Copyright 2026 The pcb3d Authors
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

#include <iosfwd>
#include <string>
#include <vector>

namespace pcb3d::csv {

// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;
};

void write(std::ostream& out, const Table& table);

// Reads a numeric table. `expected_header`, when non-empty, must match the
// first line exactly (after trimming whitespace). Throws ParseError with the
// offending line number.
Table read(std::istream& in, const std::vector<std::string>& expected_header = {});

}  // namespace pcb3d::csv
