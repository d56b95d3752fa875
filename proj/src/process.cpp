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

#include "pcb3d/process.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "pcb3d/errors.hpp"
#include "pcb3d/units.hpp"

namespace pcb3d {
namespace {

using C = std::complex<double>;

std::array<MatXc, 4> single_paulis() {
  MatXc i = MatXc::Identity(2, 2);
  MatXc x(2, 2), y(2, 2), z(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  y << 0.0, C(0.0, -1.0), C(0.0, 1.0), 0.0;
  z << 1.0, 0.0, 0.0, -1.0;
  return {i, x, y, z};
}

MatXc kron(const MatXc& a, const MatXc& b) { return Eigen::kroneckerProduct(a, b).eval(); }

MatXc projector(int state) {
  MatXc p = MatXc::Zero(2, 2);
  p(state, state) = 1.0;
  return p;
}

MatXc rx(double theta) {
  MatXc m(2, 2);
  m << std::cos(0.5 * theta), C(0.0, -std::sin(0.5 * theta)), C(0.0, -std::sin(0.5 * theta)),
      std::cos(0.5 * theta);
  return m;
}

}  // namespace

std::vector<MatXc> pauli_basis(int num_qubits) {
  if (num_qubits < 1) throw DomainError("need at least one qubit");
  const auto p = single_paulis();
  std::vector<MatXc> basis(p.begin(), p.end());
  for (int q = 1; q < num_qubits; ++q) {
    std::vector<MatXc> next;
    next.reserve(basis.size() * 4);
    for (const auto& b : basis) {
      for (const auto& s : p) next.push_back(kron(b, s));
    }
    basis = std::move(next);
  }
  return basis;
}

ProcessMatrix ptm_from_channel(const std::function<MatXc(const MatXc&)>& channel, int num_qubits) {
  const auto basis = pauli_basis(num_qubits);
  const auto n = static_cast<Eigen::Index>(basis.size());
  const double d = static_cast<double>(1 << num_qubits);
  ProcessMatrix out{num_qubits, Eigen::MatrixXd::Zero(n, n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    const MatXc image = channel(basis[static_cast<std::size_t>(j)]);
    for (Eigen::Index i = 0; i < n; ++i) {
      out.ptm(i, j) = (basis[static_cast<std::size_t>(i)] * image).trace().real() / d;
    }
  }
  return out;
}

ProcessMatrix ptm_from_unitary(const MatXc& unitary) {
  const int dim = static_cast<int>(unitary.rows());
  int nq = 0;
  while ((1 << nq) < dim) ++nq;
  if ((1 << nq) != dim || unitary.cols() != dim) throw DomainError("unitary must be 2^n square");
  return ptm_from_channel([&](const MatXc& p) -> MatXc { return unitary * p * unitary.adjoint(); }, nq);
}

ProcessMatrix fully_depolarizing_process(int num_qubits) {
  const auto n = static_cast<Eigen::Index>(1) << (2 * num_qubits);
  ProcessMatrix out{num_qubits, Eigen::MatrixXd::Zero(n, n)};
  out.ptm(0, 0) = 1.0;
  return out;
}

ProcessMatrix identity_process(int num_qubits) {
  const auto n = static_cast<Eigen::Index>(1) << (2 * num_qubits);
  return ProcessMatrix{num_qubits, Eigen::MatrixXd::Identity(n, n)};
}

MatXc choi_matrix(const ProcessMatrix& process) {
  // J = (1/d^2) sum_ij R_ij P_j^T (x) P_i, for the channel acting on the second factor.
  const auto basis = pauli_basis(process.num_qubits);
  const auto d = process.dimension();
  MatXc j = MatXc::Zero(d * d, d * d);
  const auto n = static_cast<Eigen::Index>(basis.size());
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      const double r = process.ptm(a, b);
      if (r == 0.0) continue;
      j += r * kron(basis[static_cast<std::size_t>(b)].transpose(), basis[static_cast<std::size_t>(a)]);
    }
  }
  return j / static_cast<double>(d * d);
}

double trace_preservation_error(const ProcessMatrix& process) {
  double err = std::abs(process.ptm(0, 0) - 1.0);
  for (Eigen::Index j = 1; j < process.ptm.cols(); ++j) err = std::max(err, std::abs(process.ptm(0, j)));
  return err;
}

double min_choi_eigenvalue(const ProcessMatrix& process) {
  MatXc j = choi_matrix(process);
  j = 0.5 * (j + j.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<MatXc> es(j, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

GateFidelityReport average_gate_fidelity(const ProcessMatrix& process, const MatXc& ideal_unitary) {
  const ProcessMatrix ideal = ptm_from_unitary(ideal_unitary);
  if (ideal.num_qubits != process.num_qubits) throw DomainError("process and unitary dimensions differ");
  if (trace_preservation_error(process) > 1e-6) throw DomainError("process is not trace preserving");
  if (min_choi_eigenvalue(process) < -1e-6) throw DomainError("process is not completely positive");
  const double d = process.dimension();
  GateFidelityReport report;
  report.dimension = process.dimension();
  report.process_fidelity = (ideal.ptm.transpose() * process.ptm).trace() / (d * d);
  report.average_fidelity = (d * report.process_fidelity + 1.0) / (d + 1.0);
  return report;
}

MatXc cnot_unitary() {
  MatXc u = MatXc::Zero(4, 4);
  u(0, 0) = 1.0;
  u(1, 1) = 1.0;
  u(2, 3) = 1.0;
  u(3, 2) = 1.0;
  return u;
}

MatXc not_unitary() { return single_paulis()[1]; }

ProcessMatrix simulate_gate_process(const TwoQubitSystem& system, double gate_time) {
  system.validate();
  if (!(gate_time >= 0.0)) throw DomainError("gate time must be non-negative");
  const auto p = single_paulis();
  const MatXc id2 = p[0];
  const MatXc p0 = projector(0);
  const MatXc p1 = projector(1);
  const double r0 = system.target_rate(0);
  const double r1 = system.target_rate(1);

  LindbladModel model;
  const MatXc h = (2.0 * kPi) * (0.5 * r0 * kron(p0, p[1]) + 0.5 * r1 * kron(p1, p[1]));
  model.hamiltonian = [h](double) { return h; };
  // Target depolarisation conditioned on the control state: Bloch vector
  // shrinks at 1/T for each branch.
  for (int c = 0; c < 2; ++c) {
    const double g = 1.0 / system.target_decay_time(c);
    for (int k = 1; k < 4; ++k) model.jumps.push_back(std::sqrt(0.25 * g) * kron(projector(c), p[static_cast<std::size_t>(k)]));
  }
  system.control.validate();
  MatXc lower = MatXc::Zero(2, 2);
  lower(0, 1) = 1.0;
  model.jumps.push_back(std::sqrt(1.0 / system.control.t1) * kron(lower, id2));
  const double gphi = std::max(0.0, system.control.dephasing_rate());
  if (gphi > 0.0) model.jumps.push_back(std::sqrt(0.5 * gphi) * kron(p[3], id2));

  double step = std::min(system.target_t2_control0, system.target_t2_control1) / 100.0;
  step = std::min(step, system.control.t2 / 100.0);
  const double rate = std::max(r0, r1);
  if (rate > 0.0) step = std::min(step, 1.0 / (100.0 * rate));

  // Ideal frame correction: undo the unconditional target rotation and fix
  // the control phase so a pi conditional rotation becomes X.
  const double theta0 = 2.0 * kPi * r0 * gate_time;
  const double dtheta = 2.0 * kPi * (r1 - r0) * gate_time;
  const C phase = std::sin(0.5 * dtheta) >= 0.0 ? C(0.0, 1.0) : C(0.0, -1.0);
  MatXc control_frame = MatXc::Identity(2, 2);
  control_frame(1, 1) = phase;
  const MatXc frame = kron(control_frame, rx(-theta0));

  const double times[] = {gate_time};
  return ptm_from_channel(
      [&](const MatXc& in) -> MatXc {
        const MatXc out = evolve(model, in, times, step).front();
        return frame * out * frame.adjoint();
      },
      2);
}

ProcessMatrix simulate_gate_process(const QubitSpec& qubit, const DriveSpec& drive) {
  const LindbladModel model = qubit_drive_model(qubit, drive);
  const double times[] = {drive.duration};
  const double step = rabi_step(qubit, drive);
  return ptm_from_channel([&](const MatXc& in) -> MatXc { return evolve(model, in, times, step).front(); }, 1);
}

}  // namespace pcb3d
