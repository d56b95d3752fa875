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

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "pcb3d/cross_resonance.hpp"
#include "pcb3d/network.hpp"
#include "pcb3d/package.hpp"
#include "pcb3d/rabi.hpp"
#include "pcb3d/resonator.hpp"

namespace pcb3d {

struct SweepConfig {
  double f_min = 3e9;
  double f_max = 8e9;
  std::size_t points = 501;
  ViaDiscontinuity via = default_via();
  int vias = 1;
};

// Synthetic notch trace: model plus grid span and noise level.
struct FitConfig {
  NotchResonanceModel model;
  std::size_t points = 401;
  double span_linewidths = 20.0;  // full span in units of f0/Ql
  double noise = 0.0;             // per-quadrature sigma relative to amplitude
};

struct RabiConfig {
  QubitSpec qubit{5e9, 3.47e-6, 3.47e-6};
  DriveSpec drive{2e6, 0.0, 5e-6, Envelope::rectangular, 0.0};
  double t_max = 5e-6;
  std::size_t points = 501;
  double noise = 0.0;
};

struct CrConfig {
  TwoQubitSystem system;
  double t_max = 1e-6;
};

// Parsed configuration document. Every block is optional; numeric fields take
// unit-suffixed strings ("0.508mm", "5.372GHz") or bare SI numbers. Unknown
// keys are rejected with ParseError.
struct RunConfig {
  std::optional<std::uint64_t> seed;
  std::optional<Package> stackup;
  std::optional<SweepConfig> sweep;
  std::optional<FitConfig> fit;
  std::optional<RabiConfig> rabi;
  std::optional<CrConfig> cr;
  std::optional<nlohmann::json> layout;
};

RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::string& path);

// Package-calibrated defaults used when a block is absent.
CrConfig nju13_cr_config();
FitConfig nju13_fit_config(int cavity);  // cavity 1 or 2

Package parse_package(const nlohmann::json& doc, const std::string& where = "/stackup");

}  // namespace pcb3d
