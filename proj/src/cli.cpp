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

#include "pcb3d/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pcb3d/cavity.hpp"
#include "pcb3d/config.hpp"
#include "pcb3d/cpw.hpp"
#include "pcb3d/cross_resonance.hpp"
#include "pcb3d/crosstalk.hpp"
#include "pcb3d/csv.hpp"
#include "pcb3d/errors.hpp"
#include "pcb3d/lattice.hpp"
#include "pcb3d/process.hpp"
#include "pcb3d/signal_path.hpp"
#include "pcb3d/units.hpp"

namespace pcb3d::cli {
namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 1;
constexpr const char* kSchemaHint = "config schema: see docs/config.md";

// Collects results for the stdout table and the JSON report.
class Session {
 public:
  Session(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  std::ostream& out() { return out_; }
  std::ostream& err() { return err_; }

  void begin(const std::string& command) {
    report_ = json::object();
    report_["command"] = command;
    report_["results"] = json::object();
    rows_.clear();
  }

  void put(const std::string& key, double value, const std::string& unit = "") {
    report_["results"][key] = value;
    rows_.emplace_back(key, csv::format_double(value) + (unit.empty() ? "" : " " + unit));
  }
  void put(const std::string& key, const std::string& value) {
    report_["results"][key] = value;
    rows_.emplace_back(key, value);
  }
  void put(const std::string& key, bool value) {
    report_["results"][key] = value;
    rows_.emplace_back(key, value ? "yes" : "no");
  }
  void put(const std::string& key, int value) {
    report_["results"][key] = value;
    rows_.emplace_back(key, std::to_string(value));
  }

  // A named pass/fail check; the command fails if any check fails.
  void check(const std::string& name, bool ok) {
    report_["checks"][name] = ok;
    rows_.emplace_back("check " + name, ok ? "PASS" : "FAIL");
    all_ok_ = all_ok_ && ok;
  }
  bool checks_ok() const { return all_ok_; }

  void violations(const ValidationReport& r) {
    json list = json::array();
    for (const auto& v : r.violations) {
      list.push_back({{"kind", v.kind}, {"message", v.message}});
      rows_.emplace_back("violation " + v.kind, v.message);
    }
    report_["violations"] = list;
  }

  void flush(const std::string& report_path) {
    std::size_t width = 0;
    for (const auto& [k, v] : rows_) width = std::max(width, k.size());
    out_ << report_.at("command").get<std::string>() << "\n";
    for (const auto& [k, v] : rows_) out_ << "  " << std::left << std::setw(static_cast<int>(width)) << k << "  " << v << "\n";
    if (!report_path.empty()) {
      std::ofstream f(report_path);
      if (!f) throw ParseError(report_path, "cannot write report");
      f << report_.dump(2) << "\n";
    }
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
  json report_;
  std::vector<std::pair<std::string, std::string>> rows_;
  bool all_ok_ = true;
};

struct Globals {
  std::string config_path;
  std::string report_path;
  std::string csv_path;
  std::optional<std::uint64_t> seed;
  std::string exec = "parallel";
  RunConfig config;

  std::uint64_t resolved_seed() const {
    if (seed) return *seed;
    if (config.seed) return *config.seed;
    return kDefaultSeed;
  }
  Exec execution() const { return exec == "serial" ? Exec::serial : Exec::parallel; }
};

void write_csv_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path.empty()) return;
  std::ofstream f(path);
  if (!f) throw ParseError(path, "cannot write csv");
  body(f);
}

double opt_quantity(const std::string& text, Dimension dim, double fallback) {
  return text.empty() ? fallback : parse_quantity(text, dim);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path, e.what());
  }
}

Package resolve_package(const Globals& g, const std::string& preset, const std::string& file) {
  if (!file.empty()) return parse_package(read_json_file(file), "");
  if (!preset.empty()) {
    if (preset != "nju13") throw ParseError("--preset", "unknown preset '" + preset + "'");
    return nju13_package();
  }
  if (g.config.stackup) return *g.config.stackup;
  return nju13_package();
}

ChipLayout resolve_layout(const Globals& g, const std::string& preset, const std::string& file) {
  if (!file.empty()) return build_layout(read_json_file(file));
  if (!preset.empty()) {
    if (preset != "nju13") throw ParseError("--preset", "unknown preset '" + preset + "'");
    return nju13_layout();
  }
  if (g.config.layout) return build_layout(*g.config.layout);
  return nju13_layout();
}

// ---- synthetic data -------------------------------------------------------

FrequencyGrid notch_grid(const FitConfig& c) {
  const double half = 0.5 * c.span_linewidths * c.model.f0 / c.model.q_loaded;
  return FrequencyGrid::linspace(c.model.f0 - half, c.model.f0 + half, c.points);
}

std::vector<Complex> synthesize_notch(const FitConfig& c, const FrequencyGrid& grid, std::uint64_t seed) {
  std::vector<Complex> z = model_s21(c.model, grid, Exec::serial);
  if (c.noise > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, c.noise * c.model.amplitude);
    for (auto& v : z) v += Complex(n(rng), n(rng));
  }
  return z;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return t;
}

RabiTrace synthesize_rabi(const RabiConfig& c, std::uint64_t seed) {
  RabiTrace tr = simulate_rabi(c.qubit, c.drive, linspace(0.0, c.t_max, c.points));
  if (c.noise > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, c.noise);
    for (auto& p : tr.excited_population) p += n(rng);
  }
  return tr;
}

// ---- commands -------------------------------------------------------------

int cmd_stackup_check(Session& s, const Globals& g, const std::string& preset, const std::string& file) {
  s.begin("stackup-check");
  const Package p = resolve_package(g, preset, file);
  const ValidationReport r = validate_package(p);
  int metals = 0;
  int dielectrics = 0;
  for (const auto& l : p.stack.layers) (l.kind == LayerKind::metal ? metals : dielectrics)++;
  s.put("name", p.name);
  s.put("metal_layers", metals);
  s.put("dielectric_layers", dielectrics);
  s.put("contacts", static_cast<int>(p.contacts.size()));
  s.put("valid", r.valid());
  s.violations(r);
  s.flush(g.report_path);
  return r.valid() ? kExitOk : kExitFailure;
}

struct DcArgs {
  std::string length, width, thickness, resistivity, measured, preset, file;
};

int cmd_dc(Session& s, const Globals& g, const DcArgs& a) {
  s.begin("dc");
  const Package p = resolve_package(g, a.preset, a.file);
  CpwTrace t = p.longest_trace;
  t.length = opt_quantity(a.length, Dimension::length, t.length);
  t.strip_width = opt_quantity(a.width, Dimension::length, t.strip_width);
  t.metal_thickness = opt_quantity(a.thickness, Dimension::length, t.metal_thickness);
  t.resistivity = opt_quantity(a.resistivity, Dimension::resistivity, t.resistivity);
  s.put("length", t.length, "m");
  s.put("cross_section", t.cross_section(), "m2");
  s.put("resistivity", t.resistivity, "ohm*m");
  s.put("trace_resistance", dc_resistance(t), "ohm");
  if (!p.contacts.empty()) s.put("path_resistance", series_path_resistance(t, p.contacts.front()), "ohm");
  if (!a.measured.empty()) {
    const double r = parse_quantity(a.measured, Dimension::resistance);
    s.put("measured_resistance", r, "ohm");
    s.put("inferred_resistivity", resistivity_from_measurement(r, t), "ohm*m");
  }
  s.flush(g.report_path);
  return kExitOk;
}

struct CpwArgs {
  std::string w, gap, er, z0;
  bool solve = false;
};

int cmd_cpw(Session& s, const Globals& g, const CpwArgs& a) {
  s.begin("cpw");
  const double w = opt_quantity(a.w, Dimension::length, 0.5e-3);
  const double er = opt_quantity(a.er, Dimension::dimensionless, 3.66);
  s.put("strip_width", w, "m");
  s.put("relative_permittivity", er);
  if (a.solve) {
    const double z0 = opt_quantity(a.z0, Dimension::resistance, 50.0);
    const double gap = solve_gap_for_impedance(w, er, z0);
    s.put("target_impedance", z0, "ohm");
    s.put("gap", gap, "m");
    s.put("impedance", cpw_char_impedance(w, gap, er), "ohm");
  } else {
    if (a.gap.empty()) throw ParseError("--gap", "required unless --solve-gap is given");
    const double gap = parse_quantity(a.gap, Dimension::length);
    s.put("gap", gap, "m");
    s.put("impedance", cpw_char_impedance(w, gap, er), "ohm");
  }
  s.flush(g.report_path);
  return kExitOk;
}

struct CavityArgs {
  std::string a, b, d, er;
  int count = 5;
};

int cmd_cavity(Session& s, const Globals& g, const CavityArgs& a) {
  s.begin("cavity-modes");
  const CavityBox box{opt_quantity(a.a, Dimension::length, 16.2e-3), opt_quantity(a.b, Dimension::length, 16.2e-3),
                      opt_quantity(a.d, Dimension::length, 2e-3), opt_quantity(a.er, Dimension::dimensionless, 1.0)};
  const auto modes = cavity_modes(box, a.count);
  for (const auto& m : modes) {
    s.put("TE" + std::to_string(m.m) + std::to_string(m.n) + std::to_string(m.p), m.frequency, "Hz");
  }
  write_csv_file(g.csv_path, [&](std::ostream& o) {
    csv::Table t{{"m", "n", "p", "freq_hz"}, {}};
    for (const auto& m : modes) t.rows.push_back({double(m.m), double(m.n), double(m.p), m.frequency});
    csv::write(o, t);
  });
  s.flush(g.report_path);
  return kExitOk;
}

struct SweepArgs {
  std::string f_min, f_max, preset, file;
  int points = 0;
  int vias = -1;
};

std::vector<NetworkElement> chain_with_vias(const Package& p, const ViaDiscontinuity& via, int vias) {
  std::vector<NetworkElement> base = nju13_control_line(p, via);
  std::vector<NetworkElement> chain;
  for (const auto& e : base) {
    if (!std::holds_alternative<ViaDiscontinuity>(e)) {
      chain.push_back(e);
      continue;
    }
    TransmissionLineSegment spacer = std::get<TransmissionLineSegment>(base[1]);
    spacer.length = 5e-3;
    for (int i = 0; i < vias; ++i) {
      if (i > 0) chain.push_back(spacer);
      chain.push_back(via);
    }
  }
  return chain;
}

int cmd_sweep(Session& s, const Globals& g, const SweepArgs& a, double max_dip = -1.0) {
  s.begin(max_dip > 0.0 ? "reproduce via-loss" : "sweep");
  SweepConfig c = g.config.sweep.value_or(SweepConfig{});
  c.f_min = opt_quantity(a.f_min, Dimension::frequency, c.f_min);
  c.f_max = opt_quantity(a.f_max, Dimension::frequency, c.f_max);
  if (a.points > 0) c.points = static_cast<std::size_t>(a.points);
  if (a.vias >= 0) c.vias = a.vias;
  if (c.vias < 0) throw ParseError("vias", "must be non-negative");
  const Package p = resolve_package(g, a.preset, a.file);
  const FrequencyGrid grid = FrequencyGrid::linspace(c.f_min, c.f_max, c.points);
  const auto chain = chain_with_vias(p, c.via, c.vias);
  std::vector<TwoPortNetwork> nets;
  for (const auto& e : chain) nets.push_back(element_network(e, grid, 50.0));
  const TwoPortNetwork total = cascade(nets, g.execution());
  const std::vector<Complex> s21 = total.s21();
  s.put("points", static_cast<int>(grid.size()));
  s.put("vias", c.vias);
  s.put("max_dip_db", max_dip_db(s21), "dB");
  s.put("ripple_db", ripple_db(s21), "dB");
  s.put("max_spectral_norm", total.max_spectral_norm());
  s.put("reciprocity_error", total.reciprocity_error());
  s.check("passive", total.is_passive(1e-9));
  s.check("reciprocal", total.is_reciprocal(1e-9));
  if (max_dip > 0.0) s.check("dip_within_envelope", max_dip_db(s21) <= max_dip);
  write_csv_file(g.csv_path, [&](std::ostream& o) { write_s21_csv(o, grid, s21); });
  s.flush(g.report_path);
  return s.checks_ok() ? kExitOk : kExitFailure;
}

struct XtalkArgs {
  std::string preset = "buried_cpw", coupling, f_min, f_max;
  int points = 501;
};

int cmd_xtalk(Session& s, const Globals& g, const XtalkArgs& a) {
  s.begin("xtalk");
  CoupledPair pair = coupled_pair_preset(parse_isolation_preset(a.preset));
  pair.coupling_coefficient = opt_quantity(a.coupling, Dimension::dimensionless, pair.coupling_coefficient);
  const FrequencyGrid grid = FrequencyGrid::linspace(opt_quantity(a.f_min, Dimension::frequency, 3e9),
                                                     opt_quantity(a.f_max, Dimension::frequency, 8e9),
                                                     static_cast<std::size_t>(std::max(a.points, 2)));
  const auto db = crosstalk_s21(pair, grid);
  s.put("preset", a.preset);
  s.put("coupling", pair.coupling_coefficient);
  s.put("min_db", *std::min_element(db.begin(), db.end()), "dB");
  s.put("max_db", *std::max_element(db.begin(), db.end()), "dB");
  write_csv_file(g.csv_path, [&](std::ostream& o) {
    csv::Table t{{"freq_hz", "s21_db"}, {}};
    for (std::size_t i = 0; i < grid.size(); ++i) t.rows.push_back({grid[i], db[i]});
    csv::write(o, t);
  });
  s.flush(g.report_path);
  return kExitOk;
}

void put_resonance(Session& s, const ResonanceFit& f, const std::string& prefix = "") {
  s.put(prefix + "f0", f.model.f0, "Hz");
  s.put(prefix + "q_loaded", f.model.q_loaded);
  s.put(prefix + "q_coupling", f.model.q_coupling_mag);
  s.put(prefix + "q_internal", f.q_internal);
  s.put(prefix + "phi", f.model.phi, "rad");
  s.put(prefix + "residual_rms", f.residual_rms);
}

struct FitResonatorArgs {
  std::string input, noise;
  int cavity = 1;
};

int cmd_fit_resonator(Session& s, const Globals& g, const FitResonatorArgs& a) {
  s.begin("fit-resonator");
  S21Samples data;
  if (!a.input.empty()) {
    std::ifstream in(a.input);
    if (!in) throw ParseError(a.input, "cannot open input");
    data = read_s21_csv(in);
  } else {
    FitConfig c = g.config.fit.value_or(nju13_fit_config(a.cavity));
    c.noise = opt_quantity(a.noise, Dimension::dimensionless, c.noise);
    data.grid = notch_grid(c);
    data.trace = synthesize_notch(c, data.grid, g.resolved_seed());
  }
  const ResonanceFit f = fit_resonance(data.trace, data.grid, g.execution());
  put_resonance(s, f);
  s.put("amplitude", f.model.amplitude);
  s.put("phase_offset", f.model.phase_offset, "rad");
  s.put("cable_delay", f.model.cable_delay, "s");
  s.put("converged", f.converged);
  write_csv_file(g.csv_path, [&](std::ostream& o) { write_s21_samples_csv(o, data.grid, model_s21(f.model, data.grid)); });
  s.flush(g.report_path);
  return kExitOk;
}

RabiConfig rabi_config(const Globals& g) { return g.config.rabi.value_or(RabiConfig{}); }

int cmd_sim_rabi(Session& s, const Globals& g) {
  s.begin("sim-rabi");
  const RabiConfig c = rabi_config(g);
  const RabiTrace tr = synthesize_rabi(c, g.resolved_seed());
  s.put("samples", static_cast<int>(tr.times.size()));
  s.put("envelope_time", rabi_envelope_time(c.qubit), "s");
  s.put("final_population", tr.excited_population.back());
  write_csv_file(g.csv_path, [&](std::ostream& o) { write_rabi_csv(o, tr); });
  s.flush(g.report_path);
  return kExitOk;
}

void put_rabi(Session& s, const RabiFit& f) {
  s.put("omega", f.omega, "Hz");
  s.put("tau", f.tau, "s");
  s.put("amplitude", f.amplitude);
  s.put("offset", f.offset);
  s.put("residual_rms", f.residual_rms);
  s.put("converged", f.converged);
}

int cmd_fit_rabi(Session& s, const Globals& g, const std::string& input) {
  s.begin("fit-rabi");
  RabiTrace tr;
  if (!input.empty()) {
    std::ifstream in(input);
    if (!in) throw ParseError(input, "cannot open input");
    tr = read_rabi_csv(in);
  } else {
    tr = synthesize_rabi(rabi_config(g), g.resolved_seed());
  }
  const RabiFit f = fit_rabi(tr);
  put_rabi(s, f);
  write_csv_file(g.csv_path, [&](std::ostream& o) {
    RabiTrace m{tr.times, {}};
    for (double t : tr.times) m.excited_population.push_back(rabi_model(f, t));
    write_rabi_csv(o, m);
  });
  s.flush(g.report_path);
  return kExitOk;
}

CrConfig cr_config(const Globals& g) { return g.config.cr.value_or(nju13_cr_config()); }

int cmd_sim_cr(Session& s, const Globals& g, int control_state, int points) {
  s.begin("sim-cr");
  if (control_state != 0 && control_state != 1) throw ParseError("--control-state", "must be 0 or 1");
  const CrConfig c = cr_config(g);
  const RabiTrace tr = simulate_cr(c.system, control_state, linspace(0.0, c.t_max, static_cast<std::size_t>(std::max(points, 2))));
  s.put("control_state", control_state);
  s.put("target_rate", c.system.target_rate(control_state), "Hz");
  s.put("final_population", tr.excited_population.back());
  write_csv_file(g.csv_path, [&](std::ostream& o) { write_rabi_csv(o, tr); });
  s.flush(g.report_path);
  return kExitOk;
}

int cmd_calibrate(Session& s, const Globals& g) {
  s.begin("calibrate-cnot");
  const CrConfig c = cr_config(g);
  const CnotCalibration cal = calibrate_cnot(c.system, c.t_max);
  s.put("rate_control0", c.system.target_rate(0), "Hz");
  s.put("rate_control1", c.system.target_rate(1), "Hz");
  s.put("gate_time", cal.gate_time, "s");
  s.put("contrast", cal.contrast);
  s.flush(g.report_path);
  return kExitOk;
}

struct FidelityArgs {
  std::string gate = "cnot", gate_time, rabi_rate, duration, t1, t2;
};

GateFidelityReport not_fidelity(const FidelityArgs& a) {
  const double t1 = opt_quantity(a.t1, Dimension::time, 3.47e-6);
  const double t2 = opt_quantity(a.t2, Dimension::time, 3.47e-6);
  const double duration = opt_quantity(a.duration, Dimension::time, 20e-9);
  const double rate = opt_quantity(a.rabi_rate, Dimension::frequency, 0.5 / duration);
  const QubitSpec q{5e9, t1, t2};
  const DriveSpec d{rate, 0.0, duration, Envelope::rectangular, 0.0};
  return average_gate_fidelity(simulate_gate_process(q, d), not_unitary());
}

int cmd_fidelity(Session& s, const Globals& g, const FidelityArgs& a) {
  s.begin("fidelity");
  GateFidelityReport r;
  if (a.gate == "cnot") {
    const CrConfig c = cr_config(g);
    const double t = a.gate_time.empty() ? calibrate_cnot(c.system, c.t_max).gate_time
                                         : parse_quantity(a.gate_time, Dimension::time);
    s.put("gate_time", t, "s");
    r = average_gate_fidelity(simulate_gate_process(c.system, t), cnot_unitary());
  } else if (a.gate == "not") {
    r = not_fidelity(a);
  } else {
    throw ParseError("--gate", "expected 'cnot' or 'not'");
  }
  s.put("gate", a.gate);
  s.put("dimension", r.dimension);
  s.put("process_fidelity", r.process_fidelity);
  s.put("average_fidelity", r.average_fidelity);
  s.flush(g.report_path);
  return kExitOk;
}

int cmd_layout_validate(Session& s, const Globals& g, const std::string& preset, const std::string& file) {
  s.begin("layout-validate");
  const ChipLayout l = resolve_layout(g, preset, file);
  const ValidationReport r = validate_layout(l);
  s.put("name", l.name);
  s.put("qubits", static_cast<int>(l.qubits.size()));
  s.put("buses", static_cast<int>(l.buses.size()));
  s.put("readout_lines", static_cast<int>(l.readout_assignments.size()));
  s.put("valid", r.valid());
  s.violations(r);
  s.flush(g.report_path);
  return r.valid() ? kExitOk : kExitFailure;
}

int cmd_netlist(Session& s, const Globals& g, const std::string& preset, const std::string& file,
                const std::string& output) {
  const ChipLayout l = resolve_layout(g, preset, file);
  const ValidationReport r = validate_layout(l);
  if (!r.valid()) {
    s.begin("netlist");
    s.put("valid", false);
    s.violations(r);
    s.flush(g.report_path);
    return kExitFailure;
  }
  const std::string text = export_netlist_text(l);
  if (output.empty() || output == "-") {
    s.out() << text;
  } else {
    std::ofstream f(output);
    if (!f) throw ParseError(output, "cannot write netlist");
    f << text;
    s.begin("netlist");
    s.put("output", output);
    s.put("qubits", static_cast<int>(l.qubits.size()));
    s.flush(g.report_path);
  }
  return kExitOk;
}

// ---- reproduce ------------------------------------------------------------

bool within(double value, double target, double rel) { return std::abs(value - target) <= rel * std::abs(target); }

int reproduce_dc(Session& s, const Globals& g) {
  s.begin("reproduce dc");
  const CpwTrace t = nju13_package().longest_trace;
  const double r = dc_resistance(t);
  const double rho = resistivity_from_measurement(0.15, t);
  s.put("trace_resistance", r, "ohm");
  s.put("measured_resistance", 0.15, "ohm");
  s.put("inferred_resistivity", rho, "ohm*m");
  s.check("resistance_within_1pct_of_measured", within(r, 0.15, 0.01));
  s.check("resistivity_inverts", within(rho, 9.08e-8, 1e-3));
  s.flush(g.report_path);
  return s.checks_ok() ? kExitOk : kExitFailure;
}

int reproduce_cavity(Session& s, const Globals& g) {
  s.begin("reproduce cavity");
  const CavityBox box{16.2e-3, 16.2e-3, 2e-3, 1.0};
  const auto modes = cavity_modes(box, 3);
  for (const auto& m : modes) {
    s.put("TE" + std::to_string(m.m) + std::to_string(m.n) + std::to_string(m.p), m.frequency, "Hz");
  }
  s.check("lowest_mode_above_10ghz", modes.front().frequency > 10e9);
  s.flush(g.report_path);
  return s.checks_ok() ? kExitOk : kExitFailure;
}

int reproduce_xtalk(Session& s, const Globals& g) {
  s.begin("reproduce xtalk");
  const FrequencyGrid grid = FrequencyGrid::linspace(3e9, 8e9, 501);
  const auto buried = crosstalk_s21(coupled_pair_preset(IsolationPreset::buried_cpw), grid);
  const auto bond = crosstalk_s21(coupled_pair_preset(IsolationPreset::wire_bond), grid);
  const auto [bmin, bmax] = std::minmax_element(buried.begin(), buried.end());
  const auto [wmin, wmax] = std::minmax_element(bond.begin(), bond.end());
  s.put("buried_min_db", *bmin, "dB");
  s.put("buried_max_db", *bmax, "dB");
  s.put("wire_bond_min_db", *wmin, "dB");
  s.put("wire_bond_max_db", *wmax, "dB");
  bool worse = true;
  for (std::size_t i = 0; i < grid.size(); ++i) worse = worse && bond[i] > buried[i];
  s.check("buried_within_-60_-40_db", *bmin >= -60.0 && *bmax <= -40.0);
  s.check("wire_bond_near_-30_db", *wmin >= -36.0 && *wmax <= -24.0);
  s.check("wire_bond_pointwise_worse", worse);
  write_csv_file(g.csv_path, [&](std::ostream& o) {
    csv::Table t{{"freq_hz", "buried_db", "wire_bond_db"}, {}};
    for (std::size_t i = 0; i < grid.size(); ++i) t.rows.push_back({grid[i], buried[i], bond[i]});
    csv::write(o, t);
  });
  s.flush(g.report_path);
  return s.checks_ok() ? kExitOk : kExitFailure;
}

int reproduce_qi(Session& s, const Globals& g) {
  s.begin("reproduce qi");
  for (int cavity : {1, 2}) {
    const FitConfig c = nju13_fit_config(cavity);
    const FrequencyGrid grid = notch_grid(c);
    const ResonanceFit f = fit_resonance(synthesize_notch(c, grid, g.resolved_seed()), grid, g.execution());
    const std::string p = "cavity" + std::to_string(cavity) + "_";
    put_resonance(s, f, p);
    const double qi = qi_from_fit(c.model);
    s.check(p + "qi_within_0.5pct", within(f.q_internal, qi, 5e-3));
    s.check(p + "f0_within_1ppm", within(f.model.f0, c.model.f0, 1e-6));
  }
  s.flush(g.report_path);
  return s.checks_ok() ? kExitOk : kExitFailure;
}

int reproduce_rabi(Session& s, const Globals& g) {
  s.begin("reproduce rabi");
  RabiConfig c;
  c.noise = 0.01;
  const RabiTrace tr = synthesize_rabi(c, g.resolved_seed());
  const RabiFit f = fit_rabi(tr);
  put_rabi(s, f);
  s.put("expected_tau", rabi_envelope_time(c.qubit), "s");
  s.check("tau_within_5pct", within(f.tau, 3.47e-6, 0.05));
  s.check("omega_within_0.5pct", within(f.omega, c.drive.rabi_rate, 5e-3));
  write_csv_file(g.csv_path, [&](std::ostream& o) { write_rabi_csv(o, tr); });
  s.flush(g.report_path);
  return s.checks_ok() ? kExitOk : kExitFailure;
}

int reproduce_cnot(Session& s, const Globals& g) {
  s.begin("reproduce cnot");
  CrConfig ideal = nju13_cr_config();
  ideal.system.target_t2_control0 = ideal.system.target_t2_control1 = 1.0;
  const CnotCalibration cal = calibrate_cnot(ideal.system, ideal.t_max);
  s.put("gate_time", cal.gate_time, "s");
  s.put("contrast", cal.contrast);
  s.check("gate_time_350ns_within_2pct", within(cal.gate_time, 350e-9, 0.02));

  const CrConfig preset = nju13_cr_config();
  const auto cnot = average_gate_fidelity(simulate_gate_process(preset.system, 350e-9), cnot_unitary());
  s.put("cnot_average_fidelity", cnot.average_fidelity);
  s.check("cnot_fidelity_in_band", cnot.average_fidelity >= 0.55 && cnot.average_fidelity <= 0.80);

  const auto not_gate = not_fidelity(FidelityArgs{});
  s.put("not_average_fidelity", not_gate.average_fidelity);
  s.check("not_fidelity_at_least_0.97", not_gate.average_fidelity >= 0.97);
  s.flush(g.report_path);
  return s.checks_ok() ? kExitOk : kExitFailure;
}

int cmd_reproduce(Session& s, const Globals& g, const std::string& scenario) {
  if (scenario == "dc") return reproduce_dc(s, g);
  if (scenario == "cavity") return reproduce_cavity(s, g);
  if (scenario == "via-loss") return cmd_sweep(s, g, SweepArgs{"3GHz", "8GHz", "nju13", "", 501, 1}, 1.5);
  if (scenario == "xtalk") return reproduce_xtalk(s, g);
  if (scenario == "qi") return reproduce_qi(s, g);
  if (scenario == "rabi") return reproduce_rabi(s, g);
  if (scenario == "cnot") return reproduce_cnot(s, g);
  throw ParseError("reproduce", "unknown scenario '" + scenario + "'");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"pcb3d: 3D PCB packaging and qubit-control toolkit", "pcb3d"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  std::string seed_text;
  app.add_option("--config", g.config_path, "JSON config document")->check(CLI::ExistingFile);
  app.add_option("--report", g.report_path, "write a JSON report to this path");
  app.add_option("--csv", g.csv_path, "write the primary data series as CSV");
  app.add_option("--seed", seed_text, "RNG seed for synthetic noise");
  app.add_option("--exec", g.exec, "kernel execution mode")->check(CLI::IsMember({"serial", "parallel"}));

  std::string preset, file, output, input, scenario;
  auto* stackup = app.add_subcommand("stackup-check", "validate a layer stackup");
  stackup->add_option("--preset", preset);
  stackup->add_option("--stackup", file, "stackup JSON document");

  DcArgs dc;
  auto* dc_cmd = app.add_subcommand("dc", "DC resistance of the longest trace");
  dc_cmd->add_option("--length", dc.length);
  dc_cmd->add_option("--width", dc.width);
  dc_cmd->add_option("--thickness", dc.thickness);
  dc_cmd->add_option("--resistivity", dc.resistivity);
  dc_cmd->add_option("--measured", dc.measured, "measured resistance to invert");
  dc_cmd->add_option("--preset", dc.preset);
  dc_cmd->add_option("--stackup", dc.file);

  CpwArgs cpw;
  auto* cpw_cmd = app.add_subcommand("cpw", "CPW impedance or gap design");
  cpw_cmd->add_option("--w", cpw.w, "strip width");
  cpw_cmd->add_option("--gap", cpw.gap);
  cpw_cmd->add_option("--er", cpw.er, "relative permittivity");
  cpw_cmd->add_option("--z0", cpw.z0, "target impedance");
  cpw_cmd->add_flag("--solve-gap", cpw.solve);

  CavityArgs cav;
  auto* cav_cmd = app.add_subcommand("cavity-modes", "lowest box modes of the chip window");
  cav_cmd->add_option("--a", cav.a);
  cav_cmd->add_option("--b", cav.b);
  cav_cmd->add_option("--d", cav.d);
  cav_cmd->add_option("--er", cav.er);
  cav_cmd->add_option("--count", cav.count)->check(CLI::PositiveNumber);

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "S21 of the control-line chain");
  sweep->add_option("--f-min", sw.f_min);
  sweep->add_option("--f-max", sw.f_max);
  sweep->add_option("--points", sw.points)->check(CLI::Range(2, 1000000));
  sweep->add_option("--vias", sw.vias)->check(CLI::NonNegativeNumber);
  sweep->add_option("--preset", sw.preset);
  sweep->add_option("--stackup", sw.file);

  XtalkArgs xt;
  auto* xtalk = app.add_subcommand("xtalk", "crosstalk between neighbouring lines");
  xtalk->add_option("--preset", xt.preset)->check(CLI::IsMember({"buried_cpw", "wire_bond"}));
  xtalk->add_option("--coupling", xt.coupling);
  xtalk->add_option("--f-min", xt.f_min);
  xtalk->add_option("--f-max", xt.f_max);
  xtalk->add_option("--points", xt.points)->check(CLI::Range(2, 1000000));

  FitResonatorArgs fr;
  auto* fit_res = app.add_subcommand("fit-resonator", "notch-type resonator fit");
  fit_res->add_option("--input", fr.input, "CSV freq_hz,s21_re,s21_im")->check(CLI::ExistingFile);
  fit_res->add_option("--cavity", fr.cavity, "built-in synthetic cavity (1 or 2)")->check(CLI::Range(1, 2));
  fit_res->add_option("--noise", fr.noise);

  auto* sim_rabi = app.add_subcommand("sim-rabi", "simulate a Rabi experiment");
  auto* fit_rabi_cmd = app.add_subcommand("fit-rabi", "fit a Rabi trace");
  fit_rabi_cmd->add_option("--input", input, "CSV time_s,population")->check(CLI::ExistingFile);

  int control_state = 0;
  int cr_points = 1001;
  auto* sim_cr = app.add_subcommand("sim-cr", "simulate the target under a CR drive");
  sim_cr->add_option("--control-state", control_state)->check(CLI::Range(0, 1));
  sim_cr->add_option("--points", cr_points)->check(CLI::Range(2, 1000000));

  auto* calibrate = app.add_subcommand("calibrate-cnot", "find the CR gate time");

  FidelityArgs fid;
  auto* fidelity = app.add_subcommand("fidelity", "average gate fidelity of a simulated gate");
  fidelity->add_option("--gate", fid.gate)->check(CLI::IsMember({"cnot", "not"}));
  fidelity->add_option("--gate-time", fid.gate_time);
  fidelity->add_option("--rabi-rate", fid.rabi_rate);
  fidelity->add_option("--duration", fid.duration);
  fidelity->add_option("--t1", fid.t1);
  fidelity->add_option("--t2", fid.t2);

  auto* layout = app.add_subcommand("layout-validate", "check a qubit lattice layout");
  layout->add_option("--preset", preset);
  layout->add_option("--layout", file, "layout JSON document")->check(CLI::ExistingFile);

  auto* netlist = app.add_subcommand("netlist", "export a layout netlist");
  netlist->add_option("--preset", preset);
  netlist->add_option("--layout", file)->check(CLI::ExistingFile);
  netlist->add_option("--output", output, "netlist path; stdout when omitted");

  auto* reproduce = app.add_subcommand("reproduce", "regenerate a reference scenario");
  reproduce->add_option("scenario", scenario)
      ->required()
      ->check(CLI::IsMember({"dc", "cavity", "via-loss", "xtalk", "qi", "rabi", "cnot"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help() << kSchemaHint << "\n";
    return kExitUsage;
  }

  Session s(out, err);
  try {
    if (!seed_text.empty()) {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(seed_text, &used);
      if (used != seed_text.size() || seed_text.front() == '-') throw ParseError("--seed", "expected a non-negative integer");
      g.seed = v;
    }
    if (!g.config_path.empty()) g.config = load_run_config(g.config_path);

    if (stackup->parsed()) return cmd_stackup_check(s, g, preset, file);
    if (dc_cmd->parsed()) return cmd_dc(s, g, dc);
    if (cpw_cmd->parsed()) return cmd_cpw(s, g, cpw);
    if (cav_cmd->parsed()) return cmd_cavity(s, g, cav);
    if (sweep->parsed()) return cmd_sweep(s, g, sw);
    if (xtalk->parsed()) return cmd_xtalk(s, g, xt);
    if (fit_res->parsed()) return cmd_fit_resonator(s, g, fr);
    if (sim_rabi->parsed()) return cmd_sim_rabi(s, g);
    if (fit_rabi_cmd->parsed()) return cmd_fit_rabi(s, g, input);
    if (sim_cr->parsed()) return cmd_sim_cr(s, g, control_state, cr_points);
    if (calibrate->parsed()) return cmd_calibrate(s, g);
    if (fidelity->parsed()) return cmd_fidelity(s, g, fid);
    if (layout->parsed()) return cmd_layout_validate(s, g, preset, file);
    if (netlist->parsed()) return cmd_netlist(s, g, preset, file, output);
    if (reproduce->parsed()) return cmd_reproduce(s, g, scenario);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n" << kSchemaHint << "\n";
    return kExitUsage;
  } catch (const std::logic_error& e) {  // DomainError, IncompatibleError, bad numeric text
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n" << kSchemaHint << "\n";
    return kExitUsage;
  } catch (const CalibrationFailure& e) {
    err << "calibration failed: " << e.what() << " (best " << csv::format_double(e.best_time()) << " s, contrast "
        << csv::format_double(e.best_contrast()) << ")\n";
    return kExitFailure;
  } catch (const std::runtime_error& e) {  // FitFailure, NoSolutionError
    err << "failed: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"pcb3d"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace pcb3d::cli
