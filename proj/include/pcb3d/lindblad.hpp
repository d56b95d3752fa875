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

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace pcb3d {

using MatXc = Eigen::MatrixXcd;

// Time-dependent Hamiltonian (angular units, hbar = 1) plus collapse operators.
struct LindbladModel {
  std::function<MatXc(double t)> hamiltonian;
  std::vector<MatXc> jumps;
};

// d rho / dt = -i [H, rho] + sum_k (L rho L^+ - 1/2 {L^+ L, rho}).
MatXc lindblad_rhs(const MatXc& h, std::span<const MatXc> jumps, const MatXc& rho);

// Fixed-step RK4 from t = 0 through each of `times` (ascending, >= 0). Each
// interval is split into equal steps no longer than `max_step`. Works on any
// operator, not only density matrices, since the generator is linear.
std::vector<MatXc> evolve(const LindbladModel& model, const MatXc& rho0, std::span<const double> times,
                          double max_step);

}  // namespace pcb3d
