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

#include <cmath>

#include "pcb3d/errors.hpp"
#include "pcb3d/kernels.hpp"
#include "pcb3d/units.hpp"

namespace pcb3d::kernels {

#include "kernel_bodies.inc"

namespace serial {

void cascade(std::span<const SList* const> chain, double z0, SList& out) {
  check_sizes(chain, out);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = cascade_point(chain, z0, k);
}

void notch_model(const NotchParams& p, std::span<const double> freqs, std::span<Complex> out) {
  for (std::size_t i = 0; i < freqs.size(); ++i) out[i] = notch_point(p, freqs[i]);
}

void notch_residual_jacobian(const NotchParams& p, std::span<const double> freqs,
                             std::span<const Complex> data, Eigen::VectorXd& r,
                             Eigen::MatrixXd& jac) {
  const std::size_t n = freqs.size();
  r.resize(static_cast<Eigen::Index>(2 * n));
  jac.resize(static_cast<Eigen::Index>(2 * n), NotchParams::kCount);
  for (std::size_t i = 0; i < n; ++i) notch_row(p, freqs[i], data[i], i, n, r, jac);
}

}  // namespace serial

void cascade(std::span<const SList* const> chain, double z0, SList& out, Exec exec) {
  if (exec == Exec::serial) {
    serial::cascade(chain, z0, out);
  } else {
    omp::cascade(chain, z0, out);
  }
}

void notch_model(const NotchParams& p, std::span<const double> freqs, std::span<Complex> out,
                 Exec exec) {
  if (exec == Exec::serial) {
    serial::notch_model(p, freqs, out);
  } else {
    omp::notch_model(p, freqs, out);
  }
}

void notch_residual_jacobian(const NotchParams& p, std::span<const double> freqs,
                             std::span<const Complex> data, Eigen::VectorXd& r,
                             Eigen::MatrixXd& jac, Exec exec) {
  if (exec == Exec::serial) {
    serial::notch_residual_jacobian(p, freqs, data, r, jac);
  } else {
    omp::notch_residual_jacobian(p, freqs, data, r, jac);
  }
}

}  // namespace pcb3d::kernels
