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

namespace pcb3d {

// Characteristic impedance of a CPW fully embedded in a homogeneous
// dielectric (effective permittivity equals the bulk value):
//   Z0 = 30 pi / sqrt(er) * K(k') / K(k),  k = w / (w + 2 s).
double cpw_char_impedance(double strip_width, double gap, double relative_permittivity);

// Gap that realises `target_z0` for the given strip width, by bisection over
// [1 µm, 10 mm]. Throws NoSolutionError when the target lies outside the
// impedance range spanned by that bracket.
double solve_gap_for_impedance(double strip_width, double relative_permittivity, double target_z0);

inline constexpr double kMinGap = 1e-6;
inline constexpr double kMaxGap = 1e-2;

}  // namespace pcb3d
