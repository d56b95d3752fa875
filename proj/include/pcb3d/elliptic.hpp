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

namespace pcb3d {

// Complete elliptic integral of the first kind K(k), modulus convention,
// by arithmetic-geometric mean. Requires 0 <= k < 1; throws DomainError.
double elliptic_k(double k);

// K(k') with k' = sqrt(1 - k^2), evaluated without cancellation for small k.
double elliptic_k_complement(double k);

}  // namespace pcb3d
