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

#include <string_view>
#include <vector>

#include "pcb3d/network.hpp"

namespace pcb3d {

enum class IsolationPreset { buried_cpw, wire_bond };

// Weakly coupled pair of parallel lines. Far-end coupling magnitude is
// coupling_coefficient * |sin(beta l)|.
struct CoupledPair {
  TransmissionLineSegment line;
  double coupling_coefficient = 0.0;
  IsolationPreset isolation_preset = IsolationPreset::buried_cpw;
};

// Calibrated so the buried CPW lands in the -40..-60 dB band and the
// wire-bonded reference near -30 dB over 3-8 GHz.
inline constexpr double kBuriedCpwCoupling = 3e-3;
inline constexpr double kWireBondCoupling = 3e-2;
// Parallel run length of the neighbouring lines; puts beta*l = pi/2 near 5.5 GHz.
inline constexpr double kCoupledRunLength = 7e-3;

CoupledPair coupled_pair_preset(IsolationPreset preset);
IsolationPreset parse_isolation_preset(std::string_view name);

// Per-frequency far-end crosstalk in dB (floored at -200 dB).
std::vector<double> crosstalk_s21(const CoupledPair& pair, const FrequencyGrid& grid);

}  // namespace pcb3d
