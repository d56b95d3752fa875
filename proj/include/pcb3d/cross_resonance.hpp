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

#include <span>

#include "pcb3d/rabi.hpp"

namespace pcb3d {

// Effective cross-resonance pair. Driving the control at the target frequency
// rotates the target about X at ix_rate -/+ zx_rate/2 depending on the
// control state; `slow_state` picks which control state gets the minus sign.
struct TwoQubitSystem {
  QubitSpec control;
  QubitSpec target;
  double zx_rate = 0.0;  // Hz
  double ix_rate = 0.0;  // Hz
  double target_t2_control0 = 0.0;  // s, target decay with control in |0>
  double target_t2_control1 = 0.0;  // s, target decay with control in |1>
  int slow_state = 0;

  void validate() const;
  double target_rate(int control_state) const;
  double target_decay_time(int control_state) const;
};

// System whose target rotates at `rate0` / `rate1` (Hz) for control |0> / |1>.
TwoQubitSystem system_from_rates(double rate0, double rate1, double t2_control0, double t2_control1);

// Target excited population 1/2 (1 - e^{-t/T} cos(2 pi Omega_c t)).
RabiTrace simulate_cr(const TwoQubitSystem& system, int control_state, std::span<const double> times);

struct CnotCalibration {
  double gate_time = 0.0;  // s
  double contrast = 0.0;   // |P(control=1) - P(control=0)|
};

inline constexpr double kCnotContrastThreshold = 0.5;
inline constexpr double kCalibrationScanStep = 1e-9;
inline constexpr double kCalibrationRefineTolerance = 0.1e-9;

// Earliest pulse length up to t_max with maximal target contrast: 1 ns scan,
// then golden-section refinement to 0.1 ns. Throws CalibrationFailure if the
// contrast never reaches 0.5.
CnotCalibration calibrate_cnot(const TwoQubitSystem& system, double t_max);

double cnot_contrast(const TwoQubitSystem& system, double t);

}  // namespace pcb3d
