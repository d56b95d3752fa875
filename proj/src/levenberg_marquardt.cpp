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

#include "pcb3d/levenberg_marquardt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/LU>

namespace pcb3d {

LmResult levenberg_marquardt(const ResidualFn& fn, Eigen::VectorXd x0, const LmOptions& options) {
  const Eigen::Index n = x0.size();
  Eigen::VectorXd typical = options.typical.size() == n ? options.typical : Eigen::VectorXd::Zero(n);

  LmResult out;
  Eigen::VectorXd x = std::move(x0);
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  fn(x, r, &jac);
  double cost = 0.5 * r.squaredNorm();
  Eigen::VectorXd scale = Eigen::VectorXd::Zero(n);

  double lambda = 1e-3;
  Eigen::VectorXd r_new;
  for (int it = 0; it < options.max_iterations; ++it) {
    out.iterations = it + 1;
    if (cost == 0.0) {
      out.converged = true;
      break;
    }
    // Moré scaling: keep the largest column norm seen so far.
    for (Eigen::Index j = 0; j < n; ++j) scale[j] = std::max(scale[j], jac.col(j).norm());
    Eigen::VectorXd inv = scale.unaryExpr([](double s) { return s > 0.0 ? 1.0 / s : 1.0; });
    const Eigen::MatrixXd js = jac * inv.asDiagonal();
    Eigen::MatrixXd a = js.transpose() * js;
    const Eigen::VectorXd g = js.transpose() * r;
    a.diagonal().array() += lambda;
    const Eigen::VectorXd step = inv.asDiagonal() * Eigen::VectorXd(a.ldlt().solve(-g));

    const Eigen::VectorXd x_new = x + step;
    bool ok = step.allFinite() && (!options.feasible || options.feasible(x_new));
    double cost_new = cost;
    if (ok) {
      fn(x_new, r_new, nullptr);
      cost_new = 0.5 * r_new.squaredNorm();
      ok = std::isfinite(cost_new) && cost_new < cost;
    }
    if (!ok) {
      lambda *= 10.0;
      if (lambda > 1e16) {
        out.converged = true;  // no descent direction left at machine precision
        break;
      }
      continue;
    }

    x = x_new;
    cost = cost_new;
    fn(x, r, &jac);
    lambda = std::max(lambda * 0.1, 1e-15);

    bool small = true;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(step[j]) >= options.step_tolerance * (std::abs(x[j]) + typical[j])) small = false;
    }
    if (small) {
      out.converged = true;
      break;
    }
  }

  out.x = x;
  out.cost = 0.5 * r.squaredNorm();
  out.residual_count = static_cast<std::size_t>(r.size());
  const double dof = std::max<double>(1.0, static_cast<double>(r.size() - n));
  const double sigma2 = 2.0 * out.cost / dof;
  // Invert in the column-scaled basis; raw J^T J spans too many decades.
  Eigen::VectorXd col = jac.colwise().norm().transpose();
  Eigen::VectorXd inv = col.unaryExpr([](double s) { return s > 0.0 ? 1.0 / s : 1.0; });
  const Eigen::MatrixXd js = jac * inv.asDiagonal();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(js.transpose() * js);
  if (lu.isInvertible()) {
    out.covariance_diag = sigma2 * (lu.inverse().diagonal().array() * inv.array().square()).matrix();
  } else {
    out.covariance_diag = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
  }
  return out;
}

}  // namespace pcb3d
