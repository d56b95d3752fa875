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

#include <Eigen/Core>

namespace pcb3d {

using Complex = std::complex<double>;
using Mat2c = Eigen::Matrix2cd;

enum class Exec { serial, parallel };

// S <-> ABCD conversion for a two-port referenced to a real impedance z0 at
// both ports. s_to_abcd requires S21 != 0.
inline Mat2c abcd_to_s(const Mat2c& m, double z0) {
  const Complex a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  const Complex delta = a + b / z0 + c * z0 + d;
  Mat2c s;
  s(0, 0) = (a + b / z0 - c * z0 - d) / delta;
  s(0, 1) = 2.0 * (a * d - b * c) / delta;
  s(1, 0) = 2.0 / delta;
  s(1, 1) = (-a + b / z0 - c * z0 + d) / delta;
  return s;
}

inline Mat2c s_to_abcd(const Mat2c& s, double z0) {
  const Complex s11 = s(0, 0), s12 = s(0, 1), s21 = s(1, 0), s22 = s(1, 1);
  const Complex den = 2.0 * s21;
  Mat2c m;
  m(0, 0) = ((1.0 + s11) * (1.0 - s22) + s12 * s21) / den;
  m(0, 1) = z0 * ((1.0 + s11) * (1.0 + s22) - s12 * s21) / den;
  m(1, 0) = ((1.0 - s11) * (1.0 - s22) - s12 * s21) / (den * z0);
  m(1, 1) = ((1.0 - s11) * (1.0 + s22) + s12 * s21) / den;
  return m;
}

// Largest singular value of a 2x2 complex matrix (closed form via S^H S).
inline double spectral_norm(const Mat2c& s) {
  const Mat2c h = s.adjoint() * s;
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const double half = 0.5 * (a - d);
  return std::sqrt(0.5 * (a + d) + std::sqrt(half * half + std::norm(h(0, 1))));
}

// Notch-resonator parameter vector, in the order the fitter's Jacobian uses.
struct NotchParams {
  double f0 = 0.0;
  double q_loaded = 0.0;
  double q_coupling = 0.0;  // |Qc|
  double phi = 0.0;
  double amplitude = 1.0;
  double alpha = 0.0;  // global phase offset
  double delay = 0.0;  // cable delay, s

  static constexpr int kCount = 7;
};

// Data-parallel inner loops. Each kernel exists as a plain serial reference
// and an OpenMP version; both compute every grid point with identical
// arithmetic, so their outputs agree bit-for-bit.
namespace kernels {

using SList = std::vector<Mat2c>;

namespace serial {
void cascade(std::span<const SList* const> chain, double z0, SList& out);
void notch_model(const NotchParams& p, std::span<const double> freqs, std::span<Complex> out);
// Residual r = model - data stacked as [Re..., Im...] and the 2N x 7 Jacobian.
void notch_residual_jacobian(const NotchParams& p, std::span<const double> freqs,
                             std::span<const Complex> data, Eigen::VectorXd& r,
                             Eigen::MatrixXd& jac);
}  // namespace serial

namespace omp {
void cascade(std::span<const SList* const> chain, double z0, SList& out);
void notch_model(const NotchParams& p, std::span<const double> freqs, std::span<Complex> out);
void notch_residual_jacobian(const NotchParams& p, std::span<const double> freqs,
                             std::span<const Complex> data, Eigen::VectorXd& r,
                             Eigen::MatrixXd& jac);
}  // namespace omp

void cascade(std::span<const SList* const> chain, double z0, SList& out, Exec exec);
void notch_model(const NotchParams& p, std::span<const double> freqs, std::span<Complex> out,
                 Exec exec);
void notch_residual_jacobian(const NotchParams& p, std::span<const double> freqs,
                             std::span<const Complex> data, Eigen::VectorXd& r,
                             Eigen::MatrixXd& jac, Exec exec);

}  // namespace kernels
}  // namespace pcb3d
