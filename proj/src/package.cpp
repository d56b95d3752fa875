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

#include "pcb3d/package.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "pcb3d/cpw.hpp"
#include "pcb3d/errors.hpp"

namespace pcb3d {
namespace {

constexpr double kCopperResistivity = 9e-8;
constexpr double kRo4350bPermittivity = 3.66;
constexpr double kDielectricThickness = 0.508e-3;

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void require_geometry(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(what) + " must be positive, got " + fmt(value));
  }
}

}  // namespace

Package nju13_package() {
  Package p;
  p.name = "nju13";
  p.stack.layers = {
      Layer::metal("L1", 35e-6, kCopperResistivity),
      Layer::dielectric("L2", kDielectricThickness, kRo4350bPermittivity),
      Layer::metal("L3", 35e-6, kCopperResistivity),
      Layer::dielectric("L4", kDielectricThickness, kRo4350bPermittivity),
      Layer::metal("L5", 87e-6, kCopperResistivity),
      Layer::dielectric("L6", kDielectricThickness, kRo4350bPermittivity),
      Layer::metal("L7", 35e-6, kCopperResistivity),
  };
  p.stack.chip_window = ChipWindow{16.2e-3, 16.2e-3, {"L6", "L7"}};
  p.stack.expected_counts = LayerCounts{4, 3};

  for (int i = 1; i <= 13; ++i) {
    std::string id = (i < 10 ? "C0" : "C") + std::to_string(i);
    p.contacts.push_back(Contact{id, 1e-6, 0.1e-3, 50e-3});
  }

  p.longest_trace.strip_width = 0.5e-3;
  p.longest_trace.metal_thickness = 35e-6;
  p.longest_trace.length = 28.9e-3;
  p.longest_trace.layer = "L3";
  p.longest_trace.resistivity = kCopperResistivity;
  p.longest_trace.gap = solve_gap_for_impedance(0.5e-3, kRo4350bPermittivity, 50.0);
  return p;
}

ValidationReport validate_stackup(const LayerStack& stack) {
  ValidationReport report;
  if (stack.layers.empty()) {
    report.add("empty stack", "stack has no layers");
  }

  std::map<std::string, int> seen;
  int metals = 0;
  int dielectrics = 0;
  for (std::size_t i = 0; i < stack.layers.size(); ++i) {
    const Layer& l = stack.layers[i];
    if (l.name.empty()) report.add("unnamed layer", "layer " + std::to_string(i) + " has no name");
    if (++seen[l.name] == 2) report.add("duplicate layer", "layer name '" + l.name + "' repeats");
    if (!(l.thickness > 0.0)) {
      report.add("non-positive dimension", "layer " + l.name + " thickness " + fmt(l.thickness));
    }
    if (l.kind == LayerKind::metal) {
      ++metals;
      if (!(l.resistivity > 0.0)) {
        report.add("bad material", "metal layer " + l.name + " resistivity " + fmt(l.resistivity));
      }
    } else {
      ++dielectrics;
      if (!(l.relative_permittivity >= 1.0)) {
        report.add("bad material",
                   "dielectric layer " + l.name + " permittivity " + fmt(l.relative_permittivity));
      }
    }
    if (i > 0 && stack.layers[i - 1].kind == l.kind) {
      report.add("non-alternating",
                 "layers " + stack.layers[i - 1].name + " and " + l.name + " are the same kind");
    }
  }

  if (stack.expected_counts) {
    if (metals != stack.expected_counts->metal || dielectrics != stack.expected_counts->dielectric) {
      report.add("layer count", "expected " + std::to_string(stack.expected_counts->metal) +
                                    " metal / " + std::to_string(stack.expected_counts->dielectric) +
                                    " dielectric layers, found " + std::to_string(metals) + " / " +
                                    std::to_string(dielectrics));
    }
  }

  if (!stack.chip_window) {
    report.add("missing window", "no chip window defined");
  } else {
    const ChipWindow& w = *stack.chip_window;
    if (!(w.width > 0.0) || !(w.height > 0.0)) {
      report.add("non-positive dimension",
                 "chip window " + fmt(w.width) + " x " + fmt(w.height));
    }
    if (w.depth_layers.empty()) {
      report.add("missing window", "chip window cuts through no layers");
    }
    for (const auto& name : w.depth_layers) {
      if (!seen.count(name)) report.add("unknown layer", "chip window references " + name);
    }
  }
  return report;
}

ValidationReport validate_package(const Package& package) {
  ValidationReport report = validate_stackup(package.stack);
  std::map<std::string, int> ids;
  for (const auto& c : package.contacts) {
    if (++ids[c.id] == 2) report.add("duplicate contact", "contact id '" + c.id + "' repeats");
    if (!(c.area > 0.0)) report.add("non-positive dimension", "contact " + c.id + " area " + fmt(c.area));
    if (!(c.contact_resistance >= 0.0)) {
      report.add("bad contact", "contact " + c.id + " resistance " + fmt(c.contact_resistance));
    }
  }
  const CpwTrace& t = package.longest_trace;
  if (!(t.strip_width > 0.0) || !(t.gap > 0.0) || !(t.length > 0.0) || !(t.metal_thickness > 0.0)) {
    report.add("non-positive dimension", "trace geometry must be positive");
  }
  bool on_metal = false;
  for (const auto& l : package.stack.layers) {
    if (l.name == t.layer && l.kind == LayerKind::metal) on_metal = true;
  }
  if (!on_metal) report.add("unknown layer", "trace layer '" + t.layer + "' is not a metal layer");
  return report;
}

double dc_resistance(const CpwTrace& trace) {
  require_geometry(trace.strip_width, "strip width");
  require_geometry(trace.metal_thickness, "metal thickness");
  if (!(trace.length >= 0.0)) throw DomainError("trace length must be non-negative");
  if (!(trace.resistivity >= 0.0)) throw DomainError("resistivity must be non-negative");
  return trace.resistivity * trace.length / trace.cross_section();
}

double resistivity_from_measurement(double resistance, const CpwTrace& geometry) {
  if (!(resistance >= 0.0)) throw DomainError("resistance must be non-negative");
  require_geometry(geometry.strip_width, "strip width");
  require_geometry(geometry.metal_thickness, "metal thickness");
  require_geometry(geometry.length, "trace length");
  return resistance * geometry.cross_section() / geometry.length;
}

double series_path_resistance(const CpwTrace& trace, const Contact& contact) {
  return series_path_resistance(trace, std::span<const Contact>(&contact, 1));
}

double series_path_resistance(const CpwTrace& trace, std::span<const Contact> contacts) {
  double r = dc_resistance(trace);
  for (const auto& c : contacts) {
    if (!(c.contact_resistance >= 0.0)) throw DomainError("contact resistance must be non-negative");
    r += c.contact_resistance;
  }
  return r;
}

}  // namespace pcb3d
