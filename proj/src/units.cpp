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

#include "pcb3d/units.hpp"

#include <array>
#include <charconv>
#include <string>
#include <utility>

#include "pcb3d/errors.hpp"

namespace pcb3d {
namespace {

struct Suffix {
  std::string_view text;
  Dimension dim;
  double scale;
};

// Longest suffixes first so "mohm" wins over "m" style prefixes.
constexpr std::array kSuffixes = {
    Suffix{"ohm*m", Dimension::resistivity, 1.0},
    Suffix{"Ω·m", Dimension::resistivity, 1.0},
    Suffix{"mohm", Dimension::resistance, 1e-3},
    Suffix{"mΩ", Dimension::resistance, 1e-3},
    Suffix{"ohm", Dimension::resistance, 1.0},
    Suffix{"Ω", Dimension::resistance, 1.0},
    Suffix{"mm2", Dimension::area, 1e-6},
    Suffix{"um2", Dimension::area, 1e-12},
    Suffix{"m2", Dimension::area, 1.0},
    Suffix{"GHz", Dimension::frequency, 1e9},
    Suffix{"MHz", Dimension::frequency, 1e6},
    Suffix{"kHz", Dimension::frequency, 1e3},
    Suffix{"Hz", Dimension::frequency, 1.0},
    Suffix{"mm", Dimension::length, 1e-3},
    Suffix{"um", Dimension::length, 1e-6},
    Suffix{"µm", Dimension::length, 1e-6},
    Suffix{"nm", Dimension::length, 1e-9},
    Suffix{"cm", Dimension::length, 1e-2},
    Suffix{"ms", Dimension::time, 1e-3},
    Suffix{"us", Dimension::time, 1e-6},
    Suffix{"µs", Dimension::time, 1e-6},
    Suffix{"ns", Dimension::time, 1e-9},
    Suffix{"ps", Dimension::time, 1e-12},
    Suffix{"nH", Dimension::inductance, 1e-9},
    Suffix{"pH", Dimension::inductance, 1e-12},
    Suffix{"H", Dimension::inductance, 1.0},
    Suffix{"pF", Dimension::capacitance, 1e-12},
    Suffix{"fF", Dimension::capacitance, 1e-15},
    Suffix{"nF", Dimension::capacitance, 1e-9},
    Suffix{"F", Dimension::capacitance, 1.0},
    Suffix{"m", Dimension::length, 1.0},
    Suffix{"s", Dimension::time, 1.0},
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string_view dimension_name(Dimension d) {
  switch (d) {
    case Dimension::length: return "length";
    case Dimension::area: return "area";
    case Dimension::frequency: return "frequency";
    case Dimension::time: return "time";
    case Dimension::resistance: return "resistance";
    case Dimension::resistivity: return "resistivity";
    case Dimension::inductance: return "inductance";
    case Dimension::capacitance: return "capacitance";
    case Dimension::dimensionless: return "dimensionless";
  }
  return "?";
}

double parse_quantity(std::string_view text, Dimension dim) {
  std::string_view s = trim(text);
  if (s.empty()) throw ParseError("", "empty quantity");

  double value = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc()) {
    throw ParseError("", "not a number: '" + std::string(text) + "'");
  }
  std::string_view suffix = trim(std::string_view(ptr, static_cast<std::size_t>(last - ptr)));
  if (suffix.empty()) return value;

  for (const auto& sfx : kSuffixes) {
    if (sfx.text == suffix) {
      if (sfx.dim != dim) {
        throw ParseError("", "unit '" + std::string(suffix) + "' is a " +
                                 std::string(dimension_name(sfx.dim)) + ", expected " +
                                 std::string(dimension_name(dim)));
      }
      return value * sfx.scale;
    }
  }
  throw ParseError("", "unknown unit '" + std::string(suffix) + "'");
}

}  // namespace pcb3d
