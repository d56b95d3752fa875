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

namespace omp {

void cascade(std::span<const SList* const> chain, double z0, SList& out) {
  check_sizes(chain, out);
  const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    out[static_cast<std::size_t>(k)] = cascade_point(chain, z0, static_cast<std::size_t>(k));
  }
}

void notch_model(const NotchParams& p, std::span<const double> freqs, std::span<Complex> out) {
  const auto n = static_cast<std::ptrdiff_t>(freqs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = notch_point(p, freqs[static_cast<std::size_t>(i)]);
  }
}

void notch_residual_jacobian(const NotchParams& p, std::span<const double> freqs,
                             std::span<const Complex> data, Eigen::VectorXd& r,
                             Eigen::MatrixXd& jac) {
  const std::size_t n = freqs.size();
  r.resize(static_cast<Eigen::Index>(2 * n));
  jac.resize(static_cast<Eigen::Index>(2 * n), NotchParams::kCount);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    notch_row(p, freqs[k], data[k], k, n, r, jac);
  }
}

}  // namespace omp
}  // namespace pcb3d::kernels
