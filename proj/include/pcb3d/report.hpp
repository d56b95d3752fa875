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

#include <string>
#include <vector>

namespace pcb3d {

// Problems found by a structural validator. Empty `violations` means valid.
struct Violation {
  std::string kind;     // stable machine-readable tag, e.g. "non-alternating"
  std::string message;  // human-readable detail
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool valid() const { return violations.empty(); }
  bool has(const std::string& kind) const {
    for (const auto& v : violations) {
      if (v.kind == kind) return true;
    }
    return false;
  }
  void add(std::string kind, std::string message) {
    violations.push_back({std::move(kind), std::move(message)});
  }
};

}  // namespace pcb3d
