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

#include "pcb3d/config.hpp"

#include <fstream>
#include <initializer_list>

#include "pcb3d/cpw.hpp"
#include "pcb3d/errors.hpp"
#include "pcb3d/units.hpp"

namespace pcb3d {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ParseError(where, "expected an object");
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || item.key() == a;
    if (!ok) throw ParseError(where + "/" + item.key(), "unknown key");
  }
}

double quantity(const json& obj, const std::string& where, const char* key, Dimension dim) {
  const std::string w = where + "/" + key;
  if (!obj.contains(key)) throw ParseError(w, "missing required key");
  const json& v = obj.at(key);
  try {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return parse_quantity(v.get<std::string>(), dim);
  } catch (const ParseError& e) {
    throw ParseError(w, e.what());
  }
  throw ParseError(w, "expected a " + std::string(dimension_name(dim)));
}

double quantity_or(const json& obj, const std::string& where, const char* key, Dimension dim, double fallback) {
  return obj.contains(key) ? quantity(obj, where, key, dim) : fallback;
}

std::string string_at(const json& obj, const std::string& where, const char* key) {
  const std::string w = where + "/" + key;
  if (!obj.contains(key)) throw ParseError(w, "missing required key");
  if (!obj.at(key).is_string()) throw ParseError(w, "expected a string");
  return obj.at(key).get<std::string>();
}

long integer_or(const json& obj, const std::string& where, const char* key, long fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number_integer()) throw ParseError(where + "/" + key, "expected an integer");
  return obj.at(key).get<long>();
}

QubitSpec parse_qubit(const json& q, const std::string& where, const QubitSpec& base) {
  reject_unknown(q, where, {"f01", "t1", "t2"});
  QubitSpec s = base;
  s.f01 = quantity_or(q, where, "f01", Dimension::frequency, s.f01);
  s.t1 = quantity_or(q, where, "t1", Dimension::time, s.t1);
  s.t2 = quantity_or(q, where, "t2", Dimension::time, s.t2);
  return s;
}

SweepConfig parse_sweep(const json& s, const std::string& where) {
  reject_unknown(s, where, {"f_min", "f_max", "points", "via", "vias"});
  SweepConfig c;
  c.f_min = quantity_or(s, where, "f_min", Dimension::frequency, c.f_min);
  c.f_max = quantity_or(s, where, "f_max", Dimension::frequency, c.f_max);
  c.points = static_cast<std::size_t>(integer_or(s, where, "points", static_cast<long>(c.points)));
  c.vias = static_cast<int>(integer_or(s, where, "vias", c.vias));
  if (s.contains("via")) {
    const std::string w = where + "/via";
    const json& v = s.at("via");
    reject_unknown(v, w, {"inductance", "capacitance", "height"});
    c.via.series_inductance = quantity_or(v, w, "inductance", Dimension::inductance, c.via.series_inductance);
    c.via.shunt_capacitance = quantity_or(v, w, "capacitance", Dimension::capacitance, c.via.shunt_capacitance);
    c.via.height = quantity_or(v, w, "height", Dimension::length, c.via.height);
  }
  return c;
}

FitConfig parse_fit(const json& f, const std::string& where) {
  reject_unknown(f, where, {"cavity", "f0", "qi", "ql", "phi", "amplitude", "alpha", "delay", "points", "span_linewidths", "noise"});
  FitConfig c = nju13_fit_config(static_cast<int>(integer_or(f, where, "cavity", 1)));
  const double f0 = quantity_or(f, where, "f0", Dimension::frequency, c.model.f0);
  const double qi = quantity_or(f, where, "qi", Dimension::dimensionless, qi_from_fit(c.model));
  const double ql = quantity_or(f, where, "ql", Dimension::dimensionless, c.model.q_loaded);
  const double phi = quantity_or(f, where, "phi", Dimension::dimensionless, c.model.phi);
  NotchResonanceModel m = c.model;
  try {
    m = notch_from_qi(f0, qi, ql, phi);
  } catch (const DomainError& e) {
    throw ParseError(where, e.what());
  }
  m.amplitude = quantity_or(f, where, "amplitude", Dimension::dimensionless, c.model.amplitude);
  m.phase_offset = quantity_or(f, where, "alpha", Dimension::dimensionless, c.model.phase_offset);
  m.cable_delay = quantity_or(f, where, "delay", Dimension::time, c.model.cable_delay);
  c.model = m;
  c.points = static_cast<std::size_t>(integer_or(f, where, "points", static_cast<long>(c.points)));
  c.span_linewidths = quantity_or(f, where, "span_linewidths", Dimension::dimensionless, c.span_linewidths);
  c.noise = quantity_or(f, where, "noise", Dimension::dimensionless, c.noise);
  return c;
}

RabiConfig parse_rabi(const json& r, const std::string& where) {
  reject_unknown(r, where, {"qubit", "drive", "t_max", "points", "noise"});
  RabiConfig c;
  if (r.contains("qubit")) c.qubit = parse_qubit(r.at("qubit"), where + "/qubit", c.qubit);
  c.t_max = quantity_or(r, where, "t_max", Dimension::time, c.t_max);
  c.drive.duration = c.t_max;
  if (r.contains("drive")) {
    const std::string w = where + "/drive";
    const json& d = r.at("drive");
    reject_unknown(d, w, {"rabi_rate", "drive_frequency", "duration", "envelope", "rise"});
    c.drive.rabi_rate = quantity_or(d, w, "rabi_rate", Dimension::frequency, c.drive.rabi_rate);
    c.drive.drive_frequency = quantity_or(d, w, "drive_frequency", Dimension::frequency, 0.0);
    c.drive.duration = quantity_or(d, w, "duration", Dimension::time, c.t_max);
    c.drive.rise = quantity_or(d, w, "rise", Dimension::time, 0.0);
    if (d.contains("envelope")) {
      const std::string e = string_at(d, w, "envelope");
      if (e == "rectangular") {
        c.drive.envelope = Envelope::rectangular;
      } else if (e == "shaped") {
        c.drive.envelope = Envelope::shaped;
      } else {
        throw ParseError(w + "/envelope", "expected 'rectangular' or 'shaped'");
      }
    }
  }
  c.points = static_cast<std::size_t>(integer_or(r, where, "points", static_cast<long>(c.points)));
  c.noise = quantity_or(r, where, "noise", Dimension::dimensionless, c.noise);
  return c;
}

CrConfig parse_cr(const json& r, const std::string& where) {
  reject_unknown(r, where, {"rate0", "rate1", "t2_control0", "t2_control1", "control", "t_max"});
  CrConfig c = nju13_cr_config();
  const double r0 = quantity_or(r, where, "rate0", Dimension::frequency, c.system.target_rate(0));
  const double r1 = quantity_or(r, where, "rate1", Dimension::frequency, c.system.target_rate(1));
  const double t0 = quantity_or(r, where, "t2_control0", Dimension::time, c.system.target_t2_control0);
  const double t1 = quantity_or(r, where, "t2_control1", Dimension::time, c.system.target_t2_control1);
  const QubitSpec control = c.system.control;
  c.system = system_from_rates(r0, r1, t0, t1);
  c.system.control = control;
  c.system.target = control;
  if (r.contains("control")) c.system.control = parse_qubit(r.at("control"), where + "/control", control);
  c.t_max = quantity_or(r, where, "t_max", Dimension::time, c.t_max);
  return c;
}

}  // namespace

CrConfig nju13_cr_config() {
  CrConfig c;
  // One full target period (control |0>) and 1.5 periods (control |1>) in 350 ns.
  c.system = system_from_rates(1.0 / 350e-9, 1.5 / 350e-9, 750e-9, 340e-9);
  c.system.control = QubitSpec{5e9, 3.47e-6, 3.47e-6};
  c.system.target = c.system.control;
  c.t_max = 1e-6;
  return c;
}

FitConfig nju13_fit_config(int cavity) {
  FitConfig c;
  if (cavity == 1) {
    c.model = notch_from_qi(5.372e9, 62000.0, 20000.0);
  } else if (cavity == 2) {
    c.model = notch_from_qi(5.459e9, 13000.0, 7879.0);
  } else {
    throw ParseError("/fit/cavity", "cavity must be 1 or 2");
  }
  c.model.amplitude = 0.8;
  c.model.phase_offset = 0.3;
  c.model.cable_delay = 40e-9;
  return c;
}

Package parse_package(const json& doc, const std::string& where) {
  if (doc.contains("preset")) {
    reject_unknown(doc, where, {"preset"});
    if (doc.at("preset") != "nju13") throw ParseError(where + "/preset", "unknown stackup preset");
    return nju13_package();
  }
  reject_unknown(doc, where, {"name", "layers", "chip_window", "contacts", "trace", "expected_counts"});
  Package p;
  if (doc.contains("name")) p.name = string_at(doc, where, "name");
  if (!doc.contains("layers") || !doc.at("layers").is_array()) throw ParseError(where + "/layers", "expected an array");
  const json& layers = doc.at("layers");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const std::string w = where + "/layers/" + std::to_string(i);
    const json& l = layers[i];
    reject_unknown(l, w, {"name", "kind", "thickness", "resistivity", "relative_permittivity"});
    const std::string kind = string_at(l, w, "kind");
    const std::string name = string_at(l, w, "name");
    const double t = quantity(l, w, "thickness", Dimension::length);
    if (kind == "metal") {
      p.stack.layers.push_back(Layer::metal(name, t, quantity(l, w, "resistivity", Dimension::resistivity)));
    } else if (kind == "dielectric") {
      p.stack.layers.push_back(Layer::dielectric(name, t, quantity(l, w, "relative_permittivity", Dimension::dimensionless)));
    } else {
      throw ParseError(w + "/kind", "expected 'metal' or 'dielectric'");
    }
  }
  if (doc.contains("chip_window")) {
    const std::string w = where + "/chip_window";
    const json& cw = doc.at("chip_window");
    reject_unknown(cw, w, {"width", "height", "depth_layers"});
    ChipWindow win;
    win.width = quantity(cw, w, "width", Dimension::length);
    win.height = quantity(cw, w, "height", Dimension::length);
    if (cw.contains("depth_layers")) {
      if (!cw.at("depth_layers").is_array()) throw ParseError(w + "/depth_layers", "expected an array");
      for (const auto& n : cw.at("depth_layers")) {
        if (!n.is_string()) throw ParseError(w + "/depth_layers", "expected layer names");
        win.depth_layers.insert(n.get<std::string>());
      }
    }
    p.stack.chip_window = win;
  }
  if (doc.contains("contacts")) {
    const json& cs = doc.at("contacts");
    if (!cs.is_array()) throw ParseError(where + "/contacts", "expected an array");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const std::string w = where + "/contacts/" + std::to_string(i);
      reject_unknown(cs[i], w, {"id", "area", "protrusion", "resistance"});
      Contact c;
      c.id = string_at(cs[i], w, "id");
      c.area = quantity(cs[i], w, "area", Dimension::area);
      c.protrusion = quantity_or(cs[i], w, "protrusion", Dimension::length, 0.0);
      c.contact_resistance = quantity(cs[i], w, "resistance", Dimension::resistance);
      p.contacts.push_back(c);
    }
  }
  if (doc.contains("trace")) {
    const std::string w = where + "/trace";
    const json& t = doc.at("trace");
    reject_unknown(t, w, {"strip_width", "gap", "length", "metal_thickness", "layer", "resistivity", "target_impedance"});
    CpwTrace& tr = p.longest_trace;
    tr.strip_width = quantity(t, w, "strip_width", Dimension::length);
    tr.length = quantity(t, w, "length", Dimension::length);
    tr.metal_thickness = quantity(t, w, "metal_thickness", Dimension::length);
    tr.layer = string_at(t, w, "layer");
    tr.resistivity = quantity(t, w, "resistivity", Dimension::resistivity);
    if (t.contains("gap")) {
      tr.gap = quantity(t, w, "gap", Dimension::length);
    } else {
      double er = 0.0;
      for (const auto& l : p.stack.layers) {
        if (l.kind == LayerKind::dielectric) er = std::max(er, l.relative_permittivity);
      }
      const double z0 = quantity_or(t, w, "target_impedance", Dimension::resistance, 50.0);
      try {
        tr.gap = solve_gap_for_impedance(tr.strip_width, er, z0);
      } catch (const std::exception& e) {
        throw ParseError(w, std::string("cannot derive gap: ") + e.what());
      }
    }
  }
  if (doc.contains("expected_counts")) {
    const std::string w = where + "/expected_counts";
    const json& e = doc.at("expected_counts");
    reject_unknown(e, w, {"metal", "dielectric"});
    p.stack.expected_counts = LayerCounts{static_cast<int>(integer_or(e, w, "metal", 0)),
                                          static_cast<int>(integer_or(e, w, "dielectric", 0))};
  }
  return p;
}

RunConfig parse_run_config(const json& doc) {
  if (!doc.is_object()) throw ParseError("/", "config must be an object");
  reject_unknown(doc, "", {"seed", "stackup", "sweep", "fit", "rabi", "cr", "layout"});
  RunConfig c;
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) throw ParseError("/seed", "expected a non-negative integer");
    c.seed = doc.at("seed").get<std::uint64_t>();
  }
  if (doc.contains("stackup")) c.stackup = parse_package(doc.at("stackup"));
  if (doc.contains("sweep")) c.sweep = parse_sweep(doc.at("sweep"), "/sweep");
  if (doc.contains("fit")) c.fit = parse_fit(doc.at("fit"), "/fit");
  if (doc.contains("rabi")) c.rabi = parse_rabi(doc.at("rabi"), "/rabi");
  if (doc.contains("cr")) c.cr = parse_cr(doc.at("cr"), "/cr");
  if (doc.contains("layout")) c.layout = doc.at("layout");
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open config file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path, e.what());
  }
  return parse_run_config(doc);
}

}  // namespace pcb3d
