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

#include "pcb3d/cross_resonance.hpp"

#include <cmath>
#include <vector>

#include "pcb3d/errors.hpp"
#include "pcb3d/units.hpp"

namespace pcb3d {
namespace {

double target_population(const TwoQubitSystem& s, int control_state, double t) {
  const double decay = std::exp(-t / s.target_decay_time(control_state));
  return 0.5 * (1.0 - decay * std::cos(2.0 * kPi * s.target_rate(control_state) * t));
}

}  // namespace

void TwoQubitSystem::validate() const {
  if (!(zx_rate >= 0.0) || !(ix_rate >= 0.0)) throw DomainError("CR rates must be non-negative");
  if (ix_rate < 0.5 * zx_rate) throw DomainError("ix_rate must be at least zx_rate / 2");
  if (!(target_t2_control0 > 0.0) || !(target_t2_control1 > 0.0)) {
    throw DomainError("target coherence times must be positive");
  }
  if (slow_state != 0 && slow_state != 1) throw DomainError("slow_state must be 0 or 1");
}

double TwoQubitSystem::target_rate(int control_state) const {
  return control_state == slow_state ? ix_rate - 0.5 * zx_rate : ix_rate + 0.5 * zx_rate;
}

double TwoQubitSystem::target_decay_time(int control_state) const {
  return control_state == 0 ? target_t2_control0 : target_t2_control1;
}

TwoQubitSystem system_from_rates(double rate0, double rate1, double t2_control0, double t2_control1) {
  TwoQubitSystem s;
  s.ix_rate = 0.5 * (rate0 + rate1);
  s.zx_rate = std::abs(rate1 - rate0);
  s.slow_state = rate0 <= rate1 ? 0 : 1;
  s.target_t2_control0 = t2_control0;
  s.target_t2_control1 = t2_control1;
  s.control = QubitSpec{5e9, 1.0, 1.0};
  s.target = QubitSpec{5e9, 1.0, 1.0};
  return s;
}

RabiTrace simulate_cr(const TwoQubitSystem& system, int control_state, std::span<const double> times) {
  system.validate();
  if (control_state != 0 && control_state != 1) throw DomainError("control state must be 0 or 1");
  RabiTrace out;
  out.times.assign(times.begin(), times.end());
  for (double t : times) out.excited_population.push_back(target_population(system, control_state, t));
  return out;
}

double cnot_contrast(const TwoQubitSystem& system, double t) {
  return std::abs(target_population(system, 1, t) - target_population(system, 0, t));
}

CnotCalibration calibrate_cnot(const TwoQubitSystem& system, double t_max) {
  system.validate();
  if (!(t_max > 0.0)) throw DomainError("t_max must be positive");
  const auto steps = static_cast<std::size_t>(std::floor(t_max / kCalibrationScanStep + 1e-9));
  std::vector<double> c(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) c[i] = cnot_contrast(system, kCalibrationScanStep * static_cast<double>(i));

  // Refine every grid local maximum that clears the threshold.
  auto refine = [&](double lo, double hi) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - g * (hi - lo);
    double x2 = lo + g * (hi - lo);
    double f1 = cnot_contrast(system, x1);
    double f2 = cnot_contrast(system, x2);
    while (hi - lo > kCalibrationRefineTolerance) {
      if (f1 >= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = cnot_contrast(system, x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = cnot_contrast(system, x2);
      }
    }
    const double t = 0.5 * (lo + hi);
    return CnotCalibration{t, cnot_contrast(system, t)};
  };

  std::vector<CnotCalibration> peaks;
  double best_t = 0.0;
  double best_c = -1.0;
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = kCalibrationScanStep * static_cast<double>(i);
    if (c[i] > best_c) {
      best_c = c[i];
      best_t = t;
    }
    const bool left = i == 0 || c[i] >= c[i - 1];
    const bool right = i == steps || c[i] >= c[i + 1];
    if (!(left && right) || c[i] < kCnotContrastThreshold) continue;
    const double lo = std::max(0.0, t - kCalibrationScanStep);
    const double hi = std::min(t_max, t + kCalibrationScanStep);
    peaks.push_back(refine(lo, hi));
  }
  if (peaks.empty()) {
    throw CalibrationFailure("CNOT contrast never reaches " + std::to_string(kCnotContrastThreshold) +
                                 " (best " + std::to_string(best_c) + ")",
                             best_t, best_c);
  }
  double top = 0.0;
  for (const auto& p : peaks) top = std::max(top, p.contrast);
  for (const auto& p : peaks) {
    if (p.contrast >= top - 1e-6) return p;
  }
  return peaks.front();
}

}  // namespace pcb3d
