// Copyright 2026 The funcprep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdio>
#include <map>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "funcprep/circuit.hpp"
#include "funcprep/errors.hpp"

namespace funcprep {

namespace detail {

struct RegRef {
  std::string name;
  int offset;
  int size;
};

inline std::vector<RegRef> qasm_registers(const QubitLayout& l) {
  std::vector<RegRef> regs;
  auto add = [&](const char* name, int first, int size) {
    if (size > 0) regs.push_back({name, first, size});
  };
  add("main", l.main().first, l.main().size);
  add("flags", l.be_flag().first, l.be_flag().size + l.qsvt_flag().size + l.lcu_select().size);
  add("ind", l.indicator().first, l.indicator().size);
  add("anc", l.pure_ancillas().first, l.pure_ancillas().size);
  return regs;
}

inline std::string qubit_ref(const std::vector<RegRef>& regs, int q) {
  for (const auto& r : regs)
    if (q >= r.offset && q < r.offset + r.size) return r.name + "[" + std::to_string(q - r.offset) + "]";
  throw LayoutError("qubit outside every register");
}

inline std::string format_angle(double a) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", a);
  return buf;
}

}  // namespace detail

inline std::string emit_qasm(const Circuit& c) {
  const auto& l = c.layout();
  auto regs = detail::qasm_registers(l);
  std::ostringstream os;
  os << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
  os << "// layout main=" << l.main().size << " be_flag=" << l.be_flag().size
     << " qsvt_flag=" << l.qsvt_flag().size << " lcu_select=" << l.lcu_select().size
     << " indicator=" << l.indicator().size << " pure_ancillas=" << l.pure_ancillas().size << "\n";
  for (const auto& r : regs) os << "qreg " << r.name << "[" << r.size << "];\n";
  for (const auto& g : c.gates()) {
    os << gate_name(g.kind);
    if (is_rotation(g.kind)) os << "(" << detail::format_angle(g.angle) << ")";
    os << " ";
    if (g.c0 >= 0) os << detail::qubit_ref(regs, g.c0) << ",";
    if (g.c1 >= 0) os << detail::qubit_ref(regs, g.c1) << ",";
    os << detail::qubit_ref(regs, g.target) << ";\n";
  }
  return os.str();
}

// Reads the subset of OpenQASM 2.0 that emit_qasm writes.
inline Circuit parse_qasm(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::map<std::string, int> reg_size;
  std::vector<std::string> reg_order;
  int sizes[6] = {-1, -1, -1, -1, -1, -1};
  bool have_layout = false;
  std::vector<std::string> body;
  static const std::regex layout_re(
      R"(//\s*layout\s+main=(\d+)\s+be_flag=(\d+)\s+qsvt_flag=(\d+)\s+lcu_select=(\d+)\s+indicator=(\d+)\s+pure_ancillas=(\d+))");
  static const std::regex qreg_re(R"(qreg\s+(\w+)\s*\[\s*(\d+)\s*\]\s*;)");
  while (std::getline(in, line)) {
    std::smatch m;
    if (std::regex_search(line, m, layout_re)) {
      for (int i = 0; i < 6; ++i) sizes[i] = std::stoi(m[i + 1]);
      have_layout = true;
      continue;
    }
    auto cpos = line.find("//");
    if (cpos != std::string::npos) line = line.substr(0, cpos);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first);
    if (line.rfind("OPENQASM", 0) == 0 || line.rfind("include", 0) == 0) continue;
    if (std::regex_search(line, m, qreg_re)) {
      reg_size[m[1]] = std::stoi(m[2]);
      reg_order.push_back(m[1]);
      continue;
    }
    body.push_back(line);
  }
  auto size_of = [&](const std::string& n) { return reg_size.count(n) ? reg_size[n] : 0; };
  if (!have_layout) {
    int f = size_of("flags");
    sizes[0] = size_of("main");
    sizes[1] = f > 0 ? 1 : 0;
    sizes[2] = f > 1 ? 1 : 0;
    sizes[3] = f > 2 ? f - 2 : 0;
    sizes[4] = size_of("ind");
    sizes[5] = size_of("anc");
  }
  QubitLayout layout(sizes[0], sizes[1], sizes[2], sizes[3], sizes[4], sizes[5]);
  if (size_of("main") != layout.main().size ||
      size_of("flags") != sizes[1] + sizes[2] + sizes[3] || size_of("ind") != sizes[4] ||
      size_of("anc") != sizes[5])
    throw LayoutError("qasm registers disagree with the layout comment");
  std::map<std::string, int> offset = {{"main", layout.main().first},
                                       {"flags", layout.be_flag().first},
                                       {"ind", layout.indicator().first},
                                       {"anc", layout.pure_ancillas().first}};
  static const std::map<std::string, GateKind> kinds = {
      {"rx", GateKind::RX}, {"ry", GateKind::RY}, {"rz", GateKind::RZ},   {"u1", GateKind::PHASE},
      {"h", GateKind::H},   {"x", GateKind::X},   {"y", GateKind::Y},     {"z", GateKind::Z},
      {"s", GateKind::S},   {"sdg", GateKind::SDG}, {"cx", GateKind::CX}, {"ccx", GateKind::CCX}};
  static const std::regex gate_re(R"(^(\w+)\s*(?:\(\s*([^)]*)\s*\))?\s+(.*);\s*$)");
  static const std::regex arg_re(R"((\w+)\s*\[\s*(\d+)\s*\])");
  std::vector<Gate> gates;
  for (const auto& stmt : body) {
    std::smatch m;
    if (!std::regex_match(stmt, m, gate_re)) throw LayoutError("unparsable statement: " + stmt);
    auto k = kinds.find(m[1]);
    if (k == kinds.end()) throw LayoutError("gate outside the alphabet: " + std::string(m[1]));
    Gate g;
    g.kind = k->second;
    if (m[2].matched) g.angle = std::stod(m[2]);
    std::vector<int> qs;
    std::string args = m[3];
    for (std::sregex_iterator it(args.begin(), args.end(), arg_re), end; it != end; ++it) {
      std::string r = (*it)[1];
      int idx = std::stoi((*it)[2]);
      if (!offset.count(r) || idx >= size_of(r)) throw LayoutError("unknown qubit " + r);
      qs.push_back(offset[r] + idx);
    }
    if (static_cast<int>(qs.size()) != g.num_controls() + 1) throw LayoutError("wrong arity: " + stmt);
    g.target = qs.back();
    if (qs.size() > 1) g.c0 = qs[0];
    if (qs.size() > 2) g.c1 = qs[1];
    gates.push_back(g);
  }
  return Circuit(layout, std::move(gates));
}

}  // namespace funcprep
