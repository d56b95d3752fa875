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

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "pcb3d/report.hpp"

namespace pcb3d {

enum class LayerKind { metal, dielectric };

// One layer of the PCB stackup. Metals carry a resistivity, dielectrics a
// relative permittivity; the unused field is zero.
struct Layer {
  std::string name;
  LayerKind kind = LayerKind::metal;
  double thickness = 0.0;               // m
  double resistivity = 0.0;             // Ω·m, metal only
  double relative_permittivity = 0.0;   // dielectric only

  static Layer metal(std::string name, double thickness, double resistivity) {
    return {std::move(name), LayerKind::metal, thickness, resistivity, 0.0};
  }
  static Layer dielectric(std::string name, double thickness, double permittivity) {
    return {std::move(name), LayerKind::dielectric, thickness, 0.0, permittivity};
  }

  bool operator==(const Layer&) const = default;
};

struct ChipWindow {
  double width = 0.0;   // m
  double height = 0.0;  // m
  std::set<std::string> depth_layers;

  bool operator==(const ChipWindow&) const = default;
};

struct LayerCounts {
  int metal = 0;
  int dielectric = 0;
  bool operator==(const LayerCounts&) const = default;
};

struct LayerStack {
  std::vector<Layer> layers;
  std::optional<ChipWindow> chip_window;
  // Presets pin the exact layer census; free-form stacks leave this empty.
  std::optional<LayerCounts> expected_counts;

  bool operator==(const LayerStack&) const = default;
};

struct CpwTrace {
  double strip_width = 0.0;      // m
  double gap = 0.0;              // m
  double length = 0.0;           // m
  double metal_thickness = 0.0;  // m
  std::string layer;
  double resistivity = 0.0;      // Ω·m

  double cross_section() const { return strip_width * metal_thickness; }
  bool operator==(const CpwTrace&) const = default;
};

// Contact pad protruding from the dielectric; electrically a lumped series resistor.
struct Contact {
  std::string id;
  double area = 0.0;                // m²
  double protrusion = 0.0;          // m
  double contact_resistance = 0.0;  // Ω

  bool operator==(const Contact&) const = default;
};

struct Package {
  std::string name;
  LayerStack stack;
  std::vector<Contact> contacts;
  CpwTrace longest_trace;

  bool operator==(const Package&) const = default;
};

// Built-in seven-layer package: four copper layers (35/35/87/35 µm) between
// three 0.508 mm RO4350B dielectrics, a 16.2 mm square chip window through
// L6/L7, thirteen 1 mm² contacts at 50 mΩ and the 28.9 mm longest L3 trace.
Package nju13_package();

ValidationReport validate_stackup(const LayerStack& stack);

// Stackup checks plus contact and trace sanity.
ValidationReport validate_package(const Package& package);

// ρ·l / (w·t). Zero length is allowed; non-positive width, thickness or
// negative resistivity/length throw DomainError.
double dc_resistance(const CpwTrace& trace);

// Inverse of dc_resistance: R·S/l, using the trace's geometry.
double resistivity_from_measurement(double resistance, const CpwTrace& geometry);

double series_path_resistance(const CpwTrace& trace, const Contact& contact);
double series_path_resistance(const CpwTrace& trace, std::span<const Contact> contacts);

}  // namespace pcb3d
