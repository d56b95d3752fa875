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

#include "pcb3d/lindblad.hpp"

#include <cmath>

#include "pcb3d/errors.hpp"

namespace pcb3d {

MatXc lindblad_rhs(const MatXc& h, std::span<const MatXc> jumps, const MatXc& rho) {
  const std::complex<double> i(0.0, 1.0);
  MatXc out = -i * (h * rho - rho * h);
  for (const auto& l : jumps) {
    const MatXc ldl = l.adjoint() * l;
    out += l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
  }
  return out;
}

std::vector<MatXc> evolve(const LindbladModel& model, const MatXc& rho0, std::span<const double> times,
                          double max_step) {
  if (!(max_step > 0.0)) throw DomainError("integration step must be positive");
  std::vector<MatXc> out;
  out.reserve(times.size());
  MatXc rho = rho0;
  double t = 0.0;
  for (double target : times) {
    if (target < t) throw DomainError("sample times must be ascending and non-negative");
    const double span = target - t;
    const auto steps = static_cast<long>(std::ceil(span / max_step));
    const double h = steps > 0 ? span / static_cast<double>(steps) : 0.0;
    for (long s = 0; s < steps; ++s) {
      const double t0 = t + h * static_cast<double>(s);
      // land exactly on the target so a pulse edge there is seen from the inside
      const double t1 = s + 1 == steps ? target : t0 + h;
      const MatXc h0 = model.hamiltonian(t0);
      const MatXc hm = model.hamiltonian(0.5 * (t0 + t1));
      const MatXc h1 = model.hamiltonian(t1);
      const MatXc k1 = lindblad_rhs(h0, model.jumps, rho);
      const MatXc k2 = lindblad_rhs(hm, model.jumps, rho + 0.5 * h * k1);
      const MatXc k3 = lindblad_rhs(hm, model.jumps, rho + 0.5 * h * k2);
      const MatXc k4 = lindblad_rhs(h1, model.jumps, rho + h * k3);
      rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    t = target;
    out.push_back(rho);
  }
  return out;
}

}  // namespace pcb3d
