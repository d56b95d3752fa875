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

#include "pcb3d/cross_resonance.hpp"
#include "pcb3d/lindblad.hpp"

namespace pcb3d {

// Pauli transfer matrix R_ij = Tr(P_i Lambda(P_j)) / d over the n-qubit
// Pauli basis. Single-qubit order is I, X, Y, Z; qubit 0 is the most
// significant digit of the basis index. This is the one canonical process
// representation used throughout.
struct ProcessMatrix {
  int num_qubits = 1;
  Eigen::MatrixXd ptm;

  int dimension() const { return 1 << num_qubits; }
};

struct GateFidelityReport {
  double process_fidelity = 0.0;
  double average_fidelity = 0.0;
  int dimension = 0;
};

// Pauli basis operators for n qubits, in PTM index order.
std::vector<MatXc> pauli_basis(int num_qubits);

ProcessMatrix ptm_from_channel(const std::function<MatXc(const MatXc&)>& channel, int num_qubits);
ProcessMatrix ptm_from_unitary(const MatXc& unitary);
ProcessMatrix fully_depolarizing_process(int num_qubits);
ProcessMatrix identity_process(int num_qubits);

// Normalised Choi matrix (unit trace) of the process.
MatXc choi_matrix(const ProcessMatrix& process);

double trace_preservation_error(const ProcessMatrix& process);
double min_choi_eigenvalue(const ProcessMatrix& process);

// F_pro = Tr(R_U^T R) / d^2 and F_avg = (d F_pro + 1) / (d + 1). Throws
// DomainError if the process is not trace preserving within 1e-6 or its Choi
// matrix has an eigenvalue below -1e-6.
GateFidelityReport average_gate_fidelity(const ProcessMatrix& process, const MatXc& ideal_unitary);

MatXc cnot_unitary();  // control = qubit 0
MatXc not_unitary();

// CR pulse of length gate_time under the effective IX/ZX Hamiltonian with
// control-conditioned target depolarisation and control T1/T2, followed by
// ideal single-qubit frame corrections that map a calibrated CR onto CNOT.
ProcessMatrix simulate_gate_process(const TwoQubitSystem& system, double gate_time);

// Single-qubit drive of the given duration with T1/T2 decoherence.
ProcessMatrix simulate_gate_process(const QubitSpec& qubit, const DriveSpec& drive);

}  // namespace pcb3d
