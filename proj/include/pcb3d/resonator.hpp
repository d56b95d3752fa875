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
#include <optional>
#include <span>
#include <vector>

#include "pcb3d/network.hpp"

namespace pcb3d {

// Diameter-corrected notch resonator with cable delay:
//   S21(f) = a e^{i alpha} e^{-2 pi i f tau} [1 - (Ql/|Qc|) e^{i phi} / (1 + 2 i Ql (f/f0 - 1))]
struct NotchResonanceModel {
  double f0 = 0.0;              // Hz
  double q_loaded = 0.0;
  double q_coupling_mag = 0.0;  // |Qc|
  double phi = 0.0;             // impedance-mismatch rotation, rad
  double amplitude = 1.0;
  double phase_offset = 0.0;    // alpha, rad
  double cable_delay = 0.0;     // s

  NotchParams params() const;
  static NotchResonanceModel from_params(const NotchParams& p);
};

struct ResonanceFit {
  NotchResonanceModel model;
  double q_internal = 0.0;
  double residual_rms = 0.0;  // rms |model - data| relative to the fitted amplitude
  // Variances in the order f0, Ql, |Qc|, phi, amplitude, alpha, delay.
  std::vector<double> covariance_diag;
  int iterations = 0;
  bool converged = false;
};

std::vector<Complex> model_s21(const NotchResonanceModel& model, const FrequencyGrid& grid,
                               Exec exec = Exec::parallel);

// 1/Qi = 1/Ql - cos(phi)/|Qc|. Throws DomainError when that is not positive.
double qi_from_fit(const NotchResonanceModel& model);

// Model whose internal Q is `q_internal`, given Ql and phi; |Qc| follows from
// the diameter-correction relation.
NotchResonanceModel notch_from_qi(double f0, double q_internal, double q_loaded, double phi = 0.0);

// Levenberg-Marquardt fit of all model parameters. Throws FitFailure when
// fewer than 7 samples are given or no dip stands out of the noise.
ResonanceFit fit_resonance(std::span<const Complex> trace, const FrequencyGrid& grid,
                           Exec exec = Exec::parallel);

// Independent fits over many traces sharing one grid; failed fits are empty.
std::vector<std::optional<ResonanceFit>> fit_resonance_batch(std::span<const std::vector<Complex>> traces,
                                                             const FrequencyGrid& grid,
                                                             Exec exec = Exec::parallel);

// Input trace CSV: freq_hz,s21_re,s21_im.
struct S21Samples {
  FrequencyGrid grid;
  std::vector<Complex> trace;
};
S21Samples read_s21_csv(std::istream& in);
void write_s21_samples_csv(std::ostream& out, const FrequencyGrid& grid, std::span<const Complex> trace);

}  // namespace pcb3d
