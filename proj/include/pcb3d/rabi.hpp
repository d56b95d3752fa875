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
#include <span>
#include <vector>

#include "pcb3d/lindblad.hpp"

namespace pcb3d {

// Two-level transmon: transition frequency and coherence times.
struct QubitSpec {
  double f01 = 5e9;  // Hz
  double t1 = 0.0;   // s
  double t2 = 0.0;   // s, 0 < t2 <= 2 t1

  void validate() const;
  // Pure-dephasing rate 1/T2 - 1/(2 T1).
  double dephasing_rate() const { return 1.0 / t2 - 0.5 / t1; }
};

enum class Envelope { rectangular, shaped };

struct DriveSpec {
  double rabi_rate = 0.0;        // Hz (Omega / 2 pi)
  double drive_frequency = 0.0;  // Hz; 0 means resonant with the qubit
  double duration = 0.0;         // s
  Envelope envelope = Envelope::rectangular;
  double rise = 0.0;             // s, ramp length for shaped pulses

  void validate() const;
  // Instantaneous Rabi rate (Hz) at time t, including the ramps.
  double rate_at(double t) const;
};

struct RabiTrace {
  std::vector<double> times;                // s
  std::vector<double> excited_population;
};

// Envelope time constant of resonant damped Rabi oscillation, 2 / (1/T1 + 1/T2).
double rabi_envelope_time(const QubitSpec& qubit);

LindbladModel qubit_drive_model(const QubitSpec& qubit, const DriveSpec& drive);

// Integration step rule: min(1/(100 rate), t2/100), where rate covers both the
// drive and any detuning.
double rabi_step(const QubitSpec& qubit, const DriveSpec& drive);

// Lindblad evolution from the ground state; population of |1> at each time.
RabiTrace simulate_rabi(const QubitSpec& qubit, const DriveSpec& drive, std::span<const double> times);

struct RabiFit {
  double omega = 0.0;      // Hz
  double tau = 0.0;        // s (infinity when no decay is resolved)
  double amplitude = 0.0;
  double offset = 0.0;
  double phase = 0.0;      // rad
  double residual_rms = 0.0;
  bool converged = false;
};

// Least-squares fit of P(t) = A e^{-t/tau} cos(2 pi Omega t + phase) + B.
// Throws FitFailure when the spectrum has no dominant peak.
RabiFit fit_rabi(const RabiTrace& trace);

double rabi_model(const RabiFit& fit, double t);

// CSV with header time_s,population.
void write_rabi_csv(std::ostream& out, const RabiTrace& trace);
RabiTrace read_rabi_csv(std::istream& in);

}  // namespace pcb3d
