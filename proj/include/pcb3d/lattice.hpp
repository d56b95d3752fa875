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

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pcb3d/report.hpp"

namespace pcb3d {

enum class QubitRole { data, measure_x, measure_z };

struct QubitNode {
  std::string id;
  QubitRole role = QubitRole::data;
  int row = 0;
  int col = 0;

  bool operator==(const QubitNode&) const = default;
};

struct BusResonator {
  std::string id;
  std::set<std::string> endpoints;
  std::string kind = "half_wavelength_branched";

  bool operator==(const BusResonator&) const = default;
};

// Counts a preset promises; validation compares against them when present.
struct LayoutExpectations {
  int qubits = 0;
  int data = 0;
  int measure = 0;
  int buses = 0;
  int contacts = 0;

  bool operator==(const LayoutExpectations&) const = default;
};

struct ChipLayout {
  std::string name;
  std::vector<QubitNode> qubits;
  std::vector<BusResonator> buses;
  std::map<std::string, std::string> readout_assignments;  // qubit id -> contact id
  double chip_width = 0.0;   // m
  double chip_height = 0.0;  // m
  std::optional<LayoutExpectations> expected;

  const QubitNode* find(const std::string& id) const;
  bool operator==(const ChipLayout&) const = default;
};

std::string_view role_name(QubitRole role);
QubitRole parse_role(std::string_view name);

// Two qubits are lattice neighbours when they sit diagonally next to each
// other on the checkerboard grid (|dr| = |dc| = 1).
bool grid_adjacent(const QubitNode& a, const QubitNode& b);

// Thirteen transmons on the 13 even cells of a 5x5 checkerboard: data qubits
// D1..D4 on the odd/odd cells, X/Z measure qubits on the even/even cells,
// six branched bus resonators and one readout contact per qubit.
ChipLayout nju13_layout();

// Builds a layout from a config document: either {"preset": "nju13"} or an
// explicit description (see docs/config.md). Throws ParseError with a
// JSON-pointer location on malformed input.
ChipLayout build_layout(const nlohmann::json& config);

ValidationReport validate_layout(const ChipLayout& layout);

// Deterministic netlist: qubits, buses and readout lines sorted by id.
nlohmann::json export_netlist(const ChipLayout& layout);
std::string export_netlist_text(const ChipLayout& layout);
ChipLayout parse_netlist(const nlohmann::json& doc);

}  // namespace pcb3d
