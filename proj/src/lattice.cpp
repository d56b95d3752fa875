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

#include "pcb3d/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>

#include <nlohmann/json.hpp>

#include "pcb3d/errors.hpp"
#include "pcb3d/units.hpp"

namespace pcb3d {
namespace {

using nlohmann::json;

constexpr const char* kNetlistFormat = "pcb3d-netlist-1";

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ParseError(where, "expected an object");
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || item.key() == a;
    if (!ok) throw ParseError(where + "/" + item.key(), "unknown key");
  }
}

const json& require(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) throw ParseError(where + "/" + key, "missing required key");
  return obj.at(key);
}

std::string get_string(const json& v, const std::string& where) {
  if (!v.is_string()) throw ParseError(where, "expected a string");
  return v.get<std::string>();
}

int get_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ParseError(where, "expected an integer");
  return v.get<int>();
}

double get_length(const json& v, const std::string& where) {
  try {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return parse_quantity(v.get<std::string>(), Dimension::length);
  } catch (const ParseError& e) {
    throw ParseError(where, e.what());
  }
  throw ParseError(where, "expected a length");
}

LayoutExpectations parse_expected(const json& e, const std::string& where) {
  reject_unknown(e, where, {"qubits", "data", "measure", "buses", "contacts"});
  LayoutExpectations x;
  x.qubits = get_int(require(e, where, "qubits"), where + "/qubits");
  x.data = get_int(require(e, where, "data"), where + "/data");
  x.measure = get_int(require(e, where, "measure"), where + "/measure");
  x.buses = get_int(require(e, where, "buses"), where + "/buses");
  x.contacts = get_int(require(e, where, "contacts"), where + "/contacts");
  return x;
}

json expected_json(const LayoutExpectations& x) {
  return json{{"qubits", x.qubits}, {"data", x.data}, {"measure", x.measure}, {"buses", x.buses}, {"contacts", x.contacts}};
}

void parse_body(const json& doc, ChipLayout& layout, bool netlist) {
  if (doc.contains("name")) layout.name = get_string(doc.at("name"), "/name");
  const json& size = require(doc, "", "chip_size");
  reject_unknown(size, "/chip_size", {"width", "height"});
  layout.chip_width = get_length(require(size, "/chip_size", "width"), "/chip_size/width");
  layout.chip_height = get_length(require(size, "/chip_size", "height"), "/chip_size/height");

  const json& qubits = require(doc, "", "qubits");
  if (!qubits.is_array() || qubits.empty()) throw ParseError("/qubits", "expected a non-empty array");
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    const std::string w = "/qubits/" + std::to_string(i);
    const json& q = qubits[i];
    reject_unknown(q, w, {"id", "role", "row", "col"});
    QubitNode node;
    node.id = get_string(require(q, w, "id"), w + "/id");
    try {
      node.role = parse_role(get_string(require(q, w, "role"), w + "/role"));
    } catch (const ParseError& e) {
      throw ParseError(w + "/role", e.what());
    }
    node.row = get_int(require(q, w, "row"), w + "/row");
    node.col = get_int(require(q, w, "col"), w + "/col");
    layout.qubits.push_back(node);
  }

  if (doc.contains("buses")) {
    const json& buses = doc.at("buses");
    if (!buses.is_array()) throw ParseError("/buses", "expected an array");
    for (std::size_t i = 0; i < buses.size(); ++i) {
      const std::string w = "/buses/" + std::to_string(i);
      const json& b = buses[i];
      reject_unknown(b, w, {"id", "endpoints", "kind"});
      BusResonator bus;
      bus.id = get_string(require(b, w, "id"), w + "/id");
      const json& ends = require(b, w, "endpoints");
      if (!ends.is_array()) throw ParseError(w + "/endpoints", "expected an array");
      for (std::size_t k = 0; k < ends.size(); ++k) bus.endpoints.insert(get_string(ends[k], w + "/endpoints/" + std::to_string(k)));
      if (b.contains("kind")) bus.kind = get_string(b.at("kind"), w + "/kind");
      layout.buses.push_back(std::move(bus));
    }
  }

  if (netlist) {
    const json& lines = require(doc, "", "readout_lines");
    if (!lines.is_array()) throw ParseError("/readout_lines", "expected an array");
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const std::string w = "/readout_lines/" + std::to_string(i);
      reject_unknown(lines[i], w, {"line", "qubit", "contact"});
      layout.readout_assignments[get_string(require(lines[i], w, "qubit"), w + "/qubit")] =
          get_string(require(lines[i], w, "contact"), w + "/contact");
    }
  } else if (doc.contains("readout")) {
    const json& r = doc.at("readout");
    if (!r.is_object()) throw ParseError("/readout", "expected an object of qubit -> contact");
    for (const auto& item : r.items()) {
      layout.readout_assignments[item.key()] = get_string(item.value(), "/readout/" + item.key());
    }
  }
  if (doc.contains("expected")) layout.expected = parse_expected(doc.at("expected"), "/expected");
}

}  // namespace

const QubitNode* ChipLayout::find(const std::string& id) const {
  for (const auto& q : qubits) {
    if (q.id == id) return &q;
  }
  return nullptr;
}

std::string_view role_name(QubitRole role) {
  switch (role) {
    case QubitRole::data: return "data";
    case QubitRole::measure_x: return "measure_x";
    case QubitRole::measure_z: return "measure_z";
  }
  return "?";
}

QubitRole parse_role(std::string_view name) {
  if (name == "data") return QubitRole::data;
  if (name == "measure_x") return QubitRole::measure_x;
  if (name == "measure_z") return QubitRole::measure_z;
  throw ParseError("", "unknown qubit role '" + std::string(name) + "'");
}

bool grid_adjacent(const QubitNode& a, const QubitNode& b) {
  return std::abs(a.row - b.row) == 1 && std::abs(a.col - b.col) == 1;
}

ChipLayout nju13_layout() {
  ChipLayout l;
  l.name = "nju13";
  l.chip_width = 16e-3;
  l.chip_height = 16e-3;
  l.qubits = {
      {"D1", QubitRole::data, 1, 1},      {"D2", QubitRole::data, 1, 3},
      {"D3", QubitRole::data, 3, 1},      {"D4", QubitRole::data, 3, 3},
      {"X1", QubitRole::measure_x, 0, 0}, {"X2", QubitRole::measure_x, 0, 4},
      {"X3", QubitRole::measure_x, 2, 2}, {"X4", QubitRole::measure_x, 4, 0},
      {"X5", QubitRole::measure_x, 4, 4}, {"Z1", QubitRole::measure_z, 0, 2},
      {"Z2", QubitRole::measure_z, 2, 0}, {"Z3", QubitRole::measure_z, 2, 4},
      {"Z4", QubitRole::measure_z, 4, 2},
  };
  l.buses = {
      {"B1", {"X1", "D1", "Z1", "D2"}, "half_wavelength_branched"},
      {"B2", {"X2", "D2", "Z3", "D4"}, "half_wavelength_branched"},
      {"B3", {"X5", "D4", "Z4", "D3"}, "half_wavelength_branched"},
      {"B4", {"X4", "D3", "Z2", "D1"}, "half_wavelength_branched"},
      {"B5", {"X3", "D1", "D4"}, "half_wavelength_branched"},
      {"B6", {"X3", "D2", "D3"}, "half_wavelength_branched"},
  };
  std::vector<std::string> ids;
  for (const auto& q : l.qubits) ids.push_back(q.id);
  std::sort(ids.begin(), ids.end());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    l.readout_assignments[ids[i]] = (i + 1 < 10 ? "C0" : "C") + std::to_string(i + 1);
  }
  l.expected = LayoutExpectations{13, 4, 9, 6, 13};
  return l;
}

ChipLayout build_layout(const json& config) {
  if (config.is_null() || (config.is_object() && config.empty())) throw ParseError("/", "empty layout config");
  if (!config.is_object()) throw ParseError("/", "layout config must be an object");
  if (config.contains("preset")) {
    reject_unknown(config, "", {"preset"});
    const std::string name = get_string(config.at("preset"), "/preset");
    if (name == "nju13") return nju13_layout();
    throw ParseError("/preset", "unknown layout preset '" + name + "'");
  }
  reject_unknown(config, "", {"name", "chip_size", "qubits", "buses", "readout", "expected"});
  ChipLayout layout;
  parse_body(config, layout, false);
  return layout;
}

ValidationReport validate_layout(const ChipLayout& layout) {
  ValidationReport report;
  if (!(layout.chip_width > 0.0) || !(layout.chip_height > 0.0)) {
    report.add("non-positive dimension", "chip size must be positive");
  }

  std::map<std::string, const QubitNode*> by_id;
  std::map<std::pair<int, int>, std::string> by_pos;
  int data = 0;
  int measure = 0;
  for (const auto& q : layout.qubits) {
    if (!by_id.emplace(q.id, &q).second) report.add("duplicate id", "qubit id '" + q.id + "' repeats");
    auto [it, fresh] = by_pos.emplace(std::make_pair(q.row, q.col), q.id);
    if (!fresh) report.add("duplicate position", q.id + " and " + it->second + " share a grid cell");
    (q.role == QubitRole::data ? data : measure) += 1;
  }

  std::set<std::string> bus_ids;
  // Coupled pairs, stored with the lexicographically smaller id first.
  std::set<std::pair<std::string, std::string>> coupled;
  for (const auto& bus : layout.buses) {
    if (!bus_ids.insert(bus.id).second) report.add("duplicate id", "bus id '" + bus.id + "' repeats");
    if (bus.endpoints.size() < 2) {
      report.add("too few endpoints", "bus " + bus.id + " needs at least two endpoints");
      continue;
    }
    std::vector<const QubitNode*> nodes;
    bool known = true;
    for (const auto& e : bus.endpoints) {
      auto it = by_id.find(e);
      if (it == by_id.end()) {
        report.add("unknown endpoint", "bus " + bus.id + " references " + e);
        known = false;
      } else {
        nodes.push_back(it->second);
      }
    }
    if (!known) continue;

    std::vector<std::pair<const QubitNode*, const QubitNode*>> pairs;
    if (nodes.size() == 2) {
      pairs.emplace_back(nodes[0], nodes[1]);
    } else {
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
          if (grid_adjacent(*nodes[i], *nodes[j])) pairs.emplace_back(nodes[i], nodes[j]);
        }
      }
    }
    // Branches must follow lattice links: the bus is connected under adjacency.
    std::vector<int> comp(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) comp[i] = static_cast<int>(i);
    std::function<int(int)> root = [&](int i) { return comp[static_cast<std::size_t>(i)] == i ? i : comp[static_cast<std::size_t>(i)] = root(comp[static_cast<std::size_t>(i)]); };
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (std::size_t j = i + 1; j < nodes.size(); ++j) {
        if (grid_adjacent(*nodes[i], *nodes[j])) comp[static_cast<std::size_t>(root(static_cast<int>(i)))] = root(static_cast<int>(j));
      }
    }
    for (std::size_t i = 1; i < nodes.size(); ++i) {
      if (root(static_cast<int>(i)) != root(0)) {
        report.add("non-adjacent coupling", "bus " + bus.id + " joins qubits that are not lattice neighbours");
        break;
      }
    }
    for (const auto& [a, b] : pairs) {
      if (a->role == b->role) {
        report.add("same-role coupling", "bus " + bus.id + " couples " + a->id + " and " + b->id + " (both " +
                                             std::string(role_name(a->role)) + ")");
      }
      coupled.insert(std::minmax(a->id, b->id));
    }
  }

  for (const auto& q : layout.qubits) {
    if (q.role != QubitRole::data) continue;
    for (const auto& m : layout.qubits) {
      if (m.role == QubitRole::data || !grid_adjacent(q, m)) continue;
      if (!coupled.count(std::minmax(q.id, m.id))) {
        report.add("missing coupling", "data qubit " + q.id + " is not bus-coupled to neighbour " + m.id);
      }
    }
  }

  std::map<std::string, std::string> contact_owner;
  for (const auto& [qubit, contact] : layout.readout_assignments) {
    if (!by_id.count(qubit)) report.add("unknown qubit", "readout assigned to missing qubit " + qubit);
    auto [it, fresh] = contact_owner.emplace(contact, qubit);
    if (!fresh) report.add("duplicate contact", "contact " + contact + " used by " + it->second + " and " + qubit);
  }
  for (const auto& q : layout.qubits) {
    if (!layout.readout_assignments.count(q.id)) report.add("qubit without readout", "qubit " + q.id + " has no readout contact");
  }

  if (layout.expected) {
    const auto& e = *layout.expected;
    auto check = [&](const char* what, int want, std::size_t got) {
      if (static_cast<std::size_t>(want) != got) {
        report.add("count mismatch", std::string(what) + ": expected " + std::to_string(want) + ", found " + std::to_string(got));
      }
    };
    check("qubits", e.qubits, layout.qubits.size());
    check("data qubits", e.data, static_cast<std::size_t>(data));
    check("measure qubits", e.measure, static_cast<std::size_t>(measure));
    check("buses", e.buses, layout.buses.size());
    check("contacts", e.contacts, contact_owner.size());
  }
  return report;
}

json export_netlist(const ChipLayout& layout) {
  std::vector<QubitNode> qubits = layout.qubits;
  std::sort(qubits.begin(), qubits.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  std::vector<BusResonator> buses = layout.buses;
  std::sort(buses.begin(), buses.end(), [](const auto& a, const auto& b) { return a.id < b.id; });

  json doc;
  doc["format"] = kNetlistFormat;
  doc["name"] = layout.name;
  doc["chip_size"] = {{"width", layout.chip_width}, {"height", layout.chip_height}};
  doc["qubits"] = json::array();
  for (const auto& q : qubits) {
    doc["qubits"].push_back({{"id", q.id}, {"role", std::string(role_name(q.role))}, {"row", q.row}, {"col", q.col}});
  }
  doc["buses"] = json::array();
  for (const auto& b : buses) {
    doc["buses"].push_back({{"id", b.id}, {"endpoints", std::vector<std::string>(b.endpoints.begin(), b.endpoints.end())}, {"kind", b.kind}});
  }
  doc["readout_lines"] = json::array();
  std::set<std::string> contacts;
  for (const auto& [qubit, contact] : layout.readout_assignments) {
    doc["readout_lines"].push_back({{"line", "RL-" + qubit}, {"qubit", qubit}, {"contact", contact}});
    contacts.insert(contact);
  }
  doc["contacts"] = std::vector<std::string>(contacts.begin(), contacts.end());
  if (layout.expected) doc["expected"] = expected_json(*layout.expected);
  return doc;
}

std::string export_netlist_text(const ChipLayout& layout) { return export_netlist(layout).dump(2) + "\n"; }

ChipLayout parse_netlist(const json& doc) {
  if (!doc.is_object() || doc.empty()) throw ParseError("/", "empty netlist");
  reject_unknown(doc, "", {"format", "name", "chip_size", "qubits", "buses", "readout_lines", "contacts", "expected"});
  if (get_string(require(doc, "", "format"), "/format") != kNetlistFormat) {
    throw ParseError("/format", "unsupported netlist format");
  }
  ChipLayout layout;
  parse_body(doc, layout, true);
  return layout;
}

}  // namespace pcb3d
