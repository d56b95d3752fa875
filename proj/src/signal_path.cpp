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

#include "pcb3d/signal_path.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "pcb3d/cpw.hpp"
#include "pcb3d/csv.hpp"
#include "pcb3d/errors.hpp"

namespace pcb3d {
namespace {

constexpr double kSmaLength = 5e-3;
constexpr double kPtfePermittivity = 2.1;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

TwoPortNetwork element_network(const NetworkElement& element, const FrequencyGrid& grid,
                               double reference_z0) {
  return std::visit(
      overloaded{
          [&](const TransmissionLineSegment& s) { return line_network(s, grid, reference_z0); },
          [&](const ViaDiscontinuity& v) { return via_network(v, grid, reference_z0); },
          [&](const SeriesResistor& r) {
            return series_resistor_network(r.resistance, grid, reference_z0);
          },
      },
      element);
}

std::vector<Complex> sweep_s21(std::span<const NetworkElement> chain, const FrequencyGrid& grid,
                               double reference_z0, Exec exec) {
  std::vector<TwoPortNetwork> nets;
  nets.reserve(chain.size());
  for (const auto& e : chain) nets.push_back(element_network(e, grid, reference_z0));
  return cascade(nets, exec).s21();
}

std::vector<NetworkElement> nju13_control_line(const Package& package, const ViaDiscontinuity& via) {
  const CpwTrace& t = package.longest_trace;
  double er = 0.0;
  for (const auto& l : package.stack.layers) {
    if (l.kind == LayerKind::dielectric) er = std::max(er, l.relative_permittivity);
  }
  if (er < 1.0) throw DomainError("package has no dielectric layer");

  const double z_cpw = cpw_char_impedance(t.strip_width, t.gap, er);
  // Conductor loss per unit length from the DC series resistance: alpha = R' / (2 Z0).
  const double r_per_m = t.resistivity / t.cross_section();
  const double alpha = r_per_m / (2.0 * z_cpw);

  double contact_r = 0.0;
  if (!package.contacts.empty()) contact_r = package.contacts.front().contact_resistance;

  return {
      TransmissionLineSegment{50.0, kPtfePermittivity, kSmaLength, 0.0},
      TransmissionLineSegment{z_cpw, er, t.length, alpha},
      via,
      SeriesResistor{contact_r},
  };
}

double max_dip_db(std::span<const Complex> trace) {
  double worst = 0.0;
  for (const auto& s : trace) worst = std::max(worst, -to_db(s));
  return worst;
}

double ripple_db(std::span<const Complex> trace) {
  if (trace.empty()) return 0.0;
  double lo = to_db(trace.front());
  double hi = lo;
  for (const auto& s : trace) {
    lo = std::min(lo, to_db(s));
    hi = std::max(hi, to_db(s));
  }
  return hi - lo;
}

void write_s21_csv(std::ostream& out, const FrequencyGrid& grid, std::span<const Complex> trace) {
  csv::Table t;
  t.header = {"freq_hz", "s21_re", "s21_im", "s21_db"};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    t.rows.push_back({grid[k], trace[k].real(), trace[k].imag(), to_db(trace[k])});
  }
  csv::write(out, t);
}

}  // namespace pcb3d
