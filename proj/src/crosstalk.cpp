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

#include "pcb3d/crosstalk.hpp"

#include <cmath>
#include <string>

#include "pcb3d/errors.hpp"
#include "pcb3d/units.hpp"

namespace pcb3d {

CoupledPair coupled_pair_preset(IsolationPreset preset) {
  CoupledPair pair;
  pair.line = TransmissionLineSegment{50.0, 3.66, kCoupledRunLength, 0.0};
  pair.isolation_preset = preset;
  pair.coupling_coefficient = preset == IsolationPreset::buried_cpw ? kBuriedCpwCoupling : kWireBondCoupling;
  return pair;
}

IsolationPreset parse_isolation_preset(std::string_view name) {
  if (name == "buried_cpw") return IsolationPreset::buried_cpw;
  if (name == "wire_bond") return IsolationPreset::wire_bond;
  throw ParseError("preset", "unknown isolation preset '" + std::string(name) + "'");
}

std::vector<double> crosstalk_s21(const CoupledPair& pair, const FrequencyGrid& grid) {
  if (!(pair.coupling_coefficient >= 0.0 && pair.coupling_coefficient < 1.0)) {
    throw DomainError("coupling coefficient must lie in [0, 1)");
  }
  if (!(pair.line.effective_permittivity >= 1.0) || !(pair.line.length >= 0.0)) {
    throw DomainError("invalid coupled line");
  }
  std::vector<double> out(grid.size());
  const double root_eps = std::sqrt(pair.line.effective_permittivity);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double beta = 2.0 * kPi * grid[k] * root_eps / kSpeedOfLight;
    out[k] = to_db(pair.coupling_coefficient * std::abs(std::sin(beta * pair.line.length)));
  }
  return out;
}

}  // namespace pcb3d
