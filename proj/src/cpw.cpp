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

#include "pcb3d/cpw.hpp"

#include <cmath>
#include <string>

#include "pcb3d/elliptic.hpp"
#include "pcb3d/errors.hpp"
#include "pcb3d/units.hpp"

namespace pcb3d {

double cpw_char_impedance(double strip_width, double gap, double relative_permittivity) {
  if (!(strip_width > 0.0) || !(gap > 0.0)) {
    throw DomainError("CPW strip width and gap must be positive");
  }
  if (!(relative_permittivity >= 1.0)) {
    throw DomainError("relative permittivity must be >= 1");
  }
  const double k = strip_width / (strip_width + 2.0 * gap);
  return 30.0 * kPi / std::sqrt(relative_permittivity) * elliptic_k_complement(k) / elliptic_k(k);
}

double solve_gap_for_impedance(double strip_width, double relative_permittivity, double target_z0) {
  double lo = kMinGap;
  double hi = kMaxGap;
  const double z_lo = cpw_char_impedance(strip_width, lo, relative_permittivity);
  const double z_hi = cpw_char_impedance(strip_width, hi, relative_permittivity);
  if (!(target_z0 >= z_lo && target_z0 <= z_hi)) {
    throw NoSolutionError("target impedance " + std::to_string(target_z0) +
                          " ohm outside achievable range [" + std::to_string(z_lo) + ", " +
                          std::to_string(z_hi) + "] ohm");
  }
  // Z0 increases monotonically with the gap.
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (cpw_char_impedance(strip_width, mid, relative_permittivity) < target_z0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double gap = 0.5 * (lo + hi);
  if (std::abs(cpw_char_impedance(strip_width, gap, relative_permittivity) - target_z0) >= 0.01) {
    throw NoSolutionError("bisection failed to reach 0.01 ohm");
  }
  return gap;
}

}  // namespace pcb3d
