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

#include "pcb3d/cavity.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "pcb3d/errors.hpp"
#include "pcb3d/units.hpp"

namespace pcb3d {

double cavity_mode_frequency(const CavityBox& box, int m, int n, int p) {
  if (!(box.a > 0.0) || !(box.b > 0.0) || !(box.d > 0.0)) throw DomainError("cavity dimensions must be positive");
  if (!(box.relative_permittivity >= 1.0)) throw DomainError("cavity permittivity must be >= 1");
  if (m < 0 || n < 0 || p < 0 || (m != 0) + (n != 0) + (p != 0) < 2) {
    throw DomainError("a box mode needs at least two non-zero indices");
  }
  const double x = m / box.a;
  const double y = n / box.b;
  const double z = p / box.d;
  return kSpeedOfLight / (2.0 * std::sqrt(box.relative_permittivity)) * std::sqrt(x * x + y * y + z * z);
}

std::vector<CavityMode> cavity_modes(const CavityBox& box, int count) {
  if (!(box.a > 0.0) || !(box.b > 0.0) || !(box.d > 0.0)) throw DomainError("cavity dimensions must be positive");
  if (!(box.relative_permittivity >= 1.0)) throw DomainError("cavity permittivity must be >= 1");
  if (count < 1) throw DomainError("mode count must be >= 1");

  // Enumerate everything below a cutoff, doubling it until enough modes fit.
  const double unit = kSpeedOfLight / (2.0 * std::sqrt(box.relative_permittivity));
  double cutoff = cavity_mode_frequency(box, 1, 1, 1);
  std::vector<CavityMode> modes;
  for (;;) {
    modes.clear();
    const int max_m = static_cast<int>(std::floor(cutoff * box.a / unit));
    const int max_n = static_cast<int>(std::floor(cutoff * box.b / unit));
    const int max_p = static_cast<int>(std::floor(cutoff * box.d / unit));
    for (int m = 0; m <= max_m; ++m) {
      for (int n = 0; n <= max_n; ++n) {
        for (int p = 0; p <= max_p; ++p) {
          if ((m != 0) + (n != 0) + (p != 0) < 2) continue;
          const double f = cavity_mode_frequency(box, m, n, p);
          if (f <= cutoff) modes.push_back({m, n, p, f});
        }
      }
    }
    if (static_cast<int>(modes.size()) >= count) break;
    cutoff *= 2.0;
  }
  std::sort(modes.begin(), modes.end(), [](const CavityMode& l, const CavityMode& r) {
    return std::tie(l.frequency, l.m, l.n, l.p) < std::tie(r.frequency, r.m, r.n, r.p);
  });
  modes.resize(static_cast<std::size_t>(count));
  return modes;
}

}  // namespace pcb3d
