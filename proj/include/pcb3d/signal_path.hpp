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
#include <string>
#include <variant>
#include <vector>

#include "pcb3d/network.hpp"
#include "pcb3d/package.hpp"

namespace pcb3d {

struct SeriesResistor {
  double resistance = 0.0;  // Ω
};

using NetworkElement = std::variant<TransmissionLineSegment, ViaDiscontinuity, SeriesResistor>;

TwoPortNetwork element_network(const NetworkElement& element, const FrequencyGrid& grid,
                               double reference_z0);

// S21 of the cascaded chain at each grid point.
std::vector<Complex> sweep_s21(std::span<const NetworkElement> chain, const FrequencyGrid& grid,
                               double reference_z0 = 50.0, Exec exec = Exec::parallel);

// Control line of the built-in package: SMA launch, buried L3 CPW (impedance
// from the solved gap, conductor loss from the DC resistivity), the vertical
// via up to L4, and the contact resistance.
std::vector<NetworkElement> nju13_control_line(const Package& package,
                                               const ViaDiscontinuity& via = default_via());

// Worst insertion loss (-min dB) and peak-to-peak ripple of a trace, in dB.
double max_dip_db(std::span<const Complex> trace);
double ripple_db(std::span<const Complex> trace);

// CSV with header freq_hz,s21_re,s21_im,s21_db.
void write_s21_csv(std::ostream& out, const FrequencyGrid& grid, std::span<const Complex> trace);

}  // namespace pcb3d
