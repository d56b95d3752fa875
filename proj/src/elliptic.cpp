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

#include "pcb3d/elliptic.hpp"

#include <cmath>
#include <string>

#include "pcb3d/errors.hpp"
#include "pcb3d/units.hpp"

namespace pcb3d {
namespace {

double agm_k_from_complement(double kp) {
  // K(k) = pi / (2 AGM(1, k')).
  double a = 1.0;
  double b = kp;
  for (int i = 0; i < 64 && std::abs(a - b) > 1e-16 * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return kPi / (2.0 * a);
}

}  // namespace

double elliptic_k(double k) {
  if (!(k >= 0.0 && k < 1.0)) {
    throw DomainError("elliptic_k requires 0 <= k < 1, got " + std::to_string(k));
  }
  return agm_k_from_complement(std::sqrt((1.0 - k) * (1.0 + k)));
}

double elliptic_k_complement(double k) {
  if (!(k > 0.0 && k <= 1.0)) {
    throw DomainError("complementary modulus requires 0 < k <= 1, got " + std::to_string(k));
  }
  return agm_k_from_complement(k);
}

}  // namespace pcb3d
