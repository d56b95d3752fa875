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

#include <vector>

namespace pcb3d {

// Rectangular enclosure a x b x d (m) filled with a uniform dielectric.
struct CavityBox {
  double a = 0.0;
  double b = 0.0;
  double d = 0.0;
  double relative_permittivity = 1.0;
};

struct CavityMode {
  int m = 0;
  int n = 0;
  int p = 0;
  double frequency = 0.0;  // Hz

  bool operator==(const CavityMode&) const = default;
};

// f = c / (2 sqrt(er)) * sqrt((m/a)^2 + (n/b)^2 + (p/d)^2).
double cavity_mode_frequency(const CavityBox& box, int m, int n, int p);

// The `count` lowest modes with at least two non-zero indices, ascending by
// frequency then (m, n, p).
std::vector<CavityMode> cavity_modes(const CavityBox& box, int count);

}  // namespace pcb3d
