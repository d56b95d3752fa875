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

#include <Eigen/Core>

namespace pcb3d {

// Residual callback: fills r (m) and, when jac is non-null, the m x n Jacobian.
using ResidualFn = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd* jac)>;

struct LmOptions {
  int max_iterations = 200;
  // Converged once every |step_i| < step_tolerance * (|x_i| + typical_i).
  double step_tolerance = 1e-9;
  Eigen::VectorXd typical;                               // defaults to zeros
  std::function<bool(const Eigen::VectorXd&)> feasible;  // rejects steps outside the domain
};

struct LmResult {
  Eigen::VectorXd x;
  double cost = 0.0;  // 0.5 * |r|^2
  int iterations = 0;
  bool converged = false;
  Eigen::VectorXd covariance_diag;  // sigma^2 * diag((J^T J)^-1)
  std::size_t residual_count = 0;
};

// Damped Gauss-Newton (Levenberg-Marquardt) with Jacobian column scaling.
LmResult levenberg_marquardt(const ResidualFn& fn, Eigen::VectorXd x0, const LmOptions& options = {});

}  // namespace pcb3d
