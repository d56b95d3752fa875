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

#include <complex>
#include <span>
#include <vector>

#include "pcb3d/kernels.hpp"

namespace pcb3d {

// Strictly increasing, positive sample frequencies (Hz).
class FrequencyGrid {
 public:
  FrequencyGrid() = default;
  explicit FrequencyGrid(std::vector<double> points);

  static FrequencyGrid linspace(double f_min, double f_max, std::size_t count);

  std::span<const double> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }

  bool operator==(const FrequencyGrid&) const = default;

 private:
  std::vector<double> points_;
};

struct TransmissionLineSegment {
  double z0 = 50.0;                    // Ω
  double effective_permittivity = 1.0;
  double length = 0.0;                 // m
  double attenuation = 0.0;            // Np/m
};

// Lumped via: series inductance followed by a shunt capacitance to ground.
struct ViaDiscontinuity {
  double series_inductance = 0.0;  // H
  double shunt_capacitance = 0.0;  // F
  double height = 0.0;             // m
};

// Calibration knobs chosen so the in-band transmission dip stays inside the
// ~1.25 dB envelope reported for the buried-CPW-to-contact via.
inline constexpr double kDefaultViaInductance = 0.2e-9;
inline constexpr double kDefaultViaCapacitance = 0.1e-12;
inline constexpr double kDefaultViaHeight = 0.508e-3;

inline ViaDiscontinuity default_via() {
  return {kDefaultViaInductance, kDefaultViaCapacitance, kDefaultViaHeight};
}

class TwoPortNetwork {
 public:
  TwoPortNetwork(FrequencyGrid grid, std::vector<Mat2c> s, double reference_impedance);

  const FrequencyGrid& grid() const { return grid_; }
  const std::vector<Mat2c>& s() const { return s_; }
  double reference_impedance() const { return z0_; }
  std::size_t size() const { return s_.size(); }

  std::vector<Complex> s21() const;

  // max_k |S12 - S21| and max_k ||S||_2 over the grid.
  double reciprocity_error() const;
  double max_spectral_norm() const;

  bool is_reciprocal(double tol = 1e-9) const { return reciprocity_error() < tol; }
  bool is_passive(double tol = 1e-9) const { return max_spectral_norm() <= 1.0 + tol; }

 private:
  FrequencyGrid grid_;
  std::vector<Mat2c> s_;
  double z0_;
};

TwoPortNetwork network_from_abcd(const FrequencyGrid& grid, std::span<const Mat2c> abcd,
                                 double reference_z0);
TwoPortNetwork identity_network(const FrequencyGrid& grid, double reference_z0);
TwoPortNetwork line_network(const TransmissionLineSegment& seg, const FrequencyGrid& grid,
                            double reference_z0);
TwoPortNetwork via_network(const ViaDiscontinuity& via, const FrequencyGrid& grid,
                           double reference_z0);
TwoPortNetwork series_resistor_network(double resistance, const FrequencyGrid& grid,
                                       double reference_z0);

// ABCD product of the chain in order. Throws IncompatibleError when grids or
// reference impedances differ, or the chain is empty.
TwoPortNetwork cascade(std::span<const TwoPortNetwork> networks, Exec exec = Exec::parallel);

// 20 log10 |x|, floored at -200 dB.
double to_db(double magnitude);
inline double to_db(Complex x) { return to_db(std::abs(x)); }
inline constexpr double kDbFloor = -200.0;

}  // namespace pcb3d
