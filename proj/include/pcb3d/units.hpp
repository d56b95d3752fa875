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

#include <string>
#include <string_view>

namespace pcb3d {

// Physical constants (SI).
inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

enum class Dimension { length, area, frequency, time, resistance, resistivity, inductance, capacitance, dimensionless };

std::string_view dimension_name(Dimension d);

// Parses a quantity such as "0.508mm", "5.372GHz", "50mohm" or "3.66" into SI
// units. A bare number is taken as already being in SI units. Throws
// ParseError if the suffix is unknown or belongs to another dimension.
double parse_quantity(std::string_view text, Dimension dim);

}  // namespace pcb3d
