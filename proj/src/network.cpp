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

#include "pcb3d/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pcb3d/errors.hpp"
#include "pcb3d/units.hpp"

namespace pcb3d {

FrequencyGrid::FrequencyGrid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.empty()) throw DomainError("frequency grid needs at least one point");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!(points_[i] > 0.0) || !std::isfinite(points_[i])) {
      throw DomainError("frequency grid points must be positive and finite");
    }
    if (i > 0 && !(points_[i] > points_[i - 1])) {
      throw DomainError("frequency grid must be strictly increasing (index " + std::to_string(i) + ")");
    }
  }
}

FrequencyGrid FrequencyGrid::linspace(double f_min, double f_max, std::size_t count) {
  if (count == 0) throw DomainError("frequency grid needs at least one point");
  if (count == 1) return FrequencyGrid({f_min});
  if (!(f_max > f_min)) throw DomainError("f_max must exceed f_min");
  std::vector<double> pts(count);
  const double step = (f_max - f_min) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) pts[i] = f_min + step * static_cast<double>(i);
  pts.back() = f_max;
  return FrequencyGrid(std::move(pts));
}

TwoPortNetwork::TwoPortNetwork(FrequencyGrid grid, std::vector<Mat2c> s, double reference_impedance)
    : grid_(std::move(grid)), s_(std::move(s)), z0_(reference_impedance) {
  if (s_.size() != grid_.size()) throw IncompatibleError("one S matrix per grid point required");
  if (!(z0_ > 0.0)) throw DomainError("reference impedance must be positive");
}

std::vector<Complex> TwoPortNetwork::s21() const {
  std::vector<Complex> out(s_.size());
  std::transform(s_.begin(), s_.end(), out.begin(), [](const Mat2c& m) { return m(1, 0); });
  return out;
}

double TwoPortNetwork::reciprocity_error() const {
  double worst = 0.0;
  for (const auto& m : s_) worst = std::max(worst, std::abs(m(0, 1) - m(1, 0)));
  return worst;
}

double TwoPortNetwork::max_spectral_norm() const {
  double worst = 0.0;
  for (const auto& m : s_) worst = std::max(worst, spectral_norm(m));
  return worst;
}

TwoPortNetwork network_from_abcd(const FrequencyGrid& grid, std::span<const Mat2c> abcd,
                                 double reference_z0) {
  std::vector<Mat2c> s(abcd.size());
  for (std::size_t k = 0; k < abcd.size(); ++k) s[k] = abcd_to_s(abcd[k], reference_z0);
  return TwoPortNetwork(grid, std::move(s), reference_z0);
}

TwoPortNetwork identity_network(const FrequencyGrid& grid, double reference_z0) {
  std::vector<Mat2c> abcd(grid.size(), Mat2c::Identity());
  return network_from_abcd(grid, abcd, reference_z0);
}

TwoPortNetwork line_network(const TransmissionLineSegment& seg, const FrequencyGrid& grid,
                            double reference_z0) {
  if (!(seg.z0 > 0.0) || !(seg.effective_permittivity >= 1.0) || !(seg.length >= 0.0) ||
      !(seg.attenuation >= 0.0)) {
    throw DomainError("invalid transmission line segment");
  }
  std::vector<Mat2c> abcd(grid.size());
  const double root_eps = std::sqrt(seg.effective_permittivity);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double beta = 2.0 * kPi * grid[k] * root_eps / kSpeedOfLight;
    const Complex gl = Complex(seg.attenuation, beta) * seg.length;
    const Complex ch = std::cosh(gl);
    const Complex sh = std::sinh(gl);
    abcd[k] << ch, seg.z0 * sh, sh / seg.z0, ch;
  }
  return network_from_abcd(grid, abcd, reference_z0);
}

TwoPortNetwork via_network(const ViaDiscontinuity& via, const FrequencyGrid& grid,
                           double reference_z0) {
  if (!(via.series_inductance >= 0.0) || !(via.shunt_capacitance >= 0.0) || !(via.height >= 0.0)) {
    throw DomainError("via parameters must be non-negative");
  }
  std::vector<Mat2c> abcd(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double w = 2.0 * kPi * grid[k];
    const Complex zl(0.0, w * via.series_inductance);
    const Complex yc(0.0, w * via.shunt_capacitance);
    abcd[k] << 1.0 + zl * yc, zl, yc, 1.0;
  }
  return network_from_abcd(grid, abcd, reference_z0);
}

TwoPortNetwork series_resistor_network(double resistance, const FrequencyGrid& grid,
                                       double reference_z0) {
  if (!(resistance >= 0.0)) throw DomainError("series resistance must be non-negative");
  Mat2c m;
  m << 1.0, resistance, 0.0, 1.0;
  std::vector<Mat2c> abcd(grid.size(), m);
  return network_from_abcd(grid, abcd, reference_z0);
}

TwoPortNetwork cascade(std::span<const TwoPortNetwork> networks, Exec exec) {
  if (networks.empty()) throw IncompatibleError("cascade of an empty chain");
  const auto& first = networks.front();
  std::vector<const kernels::SList*> chain;
  chain.reserve(networks.size());
  for (const auto& n : networks) {
    if (!(n.grid() == first.grid())) throw IncompatibleError("cascade: frequency grids differ");
    if (n.reference_impedance() != first.reference_impedance()) {
      throw IncompatibleError("cascade: reference impedances differ");
    }
    chain.push_back(&n.s());
  }
  kernels::SList out(first.size());
  kernels::cascade(chain, first.reference_impedance(), out, exec);
  return TwoPortNetwork(first.grid(), std::move(out), first.reference_impedance());
}

double to_db(double magnitude) {
  if (!(magnitude > 0.0)) return kDbFloor;
  return std::max(20.0 * std::log10(magnitude), kDbFloor);
}

}  // namespace pcb3d
