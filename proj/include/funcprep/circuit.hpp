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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "funcprep/errors.hpp"

namespace funcprep {

enum class GateKind { RX, RY, RZ, PHASE, H, X, Y, Z, S, SDG, CX, CCX };

inline const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::RX: return "rx";
    case GateKind::RY: return "ry";
    case GateKind::RZ: return "rz";
    case GateKind::PHASE: return "u1";
    case GateKind::H: return "h";
    case GateKind::X: return "x";
    case GateKind::Y: return "y";
    case GateKind::Z: return "z";
    case GateKind::S: return "s";
    case GateKind::SDG: return "sdg";
    case GateKind::CX: return "cx";
    case GateKind::CCX: return "ccx";
  }
  return "?";
}

inline int control_arity(GateKind k) {
  if (k == GateKind::CX) return 1;
  if (k == GateKind::CCX) return 2;
  return 0;
}

inline bool is_rotation(GateKind k) {
  return k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ || k == GateKind::PHASE;
}

struct Gate {
  GateKind kind = GateKind::X;
  int target = 0;
  int c0 = -1;
  int c1 = -1;
  double angle = 0.0;

  int num_controls() const { return control_arity(kind); }

  // Throws LayoutError unless the gate is well formed for a register of `width` qubits.
  void validate(int width) const {
    auto in_range = [width](int q) { return q >= 0 && q < width; };
    if (!in_range(target)) throw LayoutError("gate target out of range");
    int nc = num_controls();
    if (nc >= 1 && (!in_range(c0) || c0 == target)) throw LayoutError("bad first control");
    if (nc == 2 && (!in_range(c1) || c1 == target || c1 == c0)) throw LayoutError("bad second control");
    if (nc < 1 && c0 != -1) throw LayoutError("unexpected control");
    if (nc < 2 && c1 != -1) throw LayoutError("unexpected control");
    if (!std::isfinite(angle)) throw LayoutError("non-finite angle");
    if (!is_rotation(kind) && angle != 0.0) throw LayoutError("angle on a fixed gate");
  }

  bool touches(int q) const { return target == q || c0 == q || c1 == q; }

  bool operator==(const Gate& o) const {
    return kind == o.kind && target == o.target && c0 == o.c0 && c1 == o.c1 && angle == o.angle;
  }
};

struct QubitRange {
  int first = 0;
  int size = 0;
  int operator[](int i) const {
    if (i < 0 || i >= size) throw LayoutError("register index out of range");
    return first + i;
  }
  std::vector<int> qubits() const {
    std::vector<int> v(size);
    for (int i = 0; i < size; ++i) v[i] = first + i;
    return v;
  }
  bool contains(int q) const { return q >= first && q < first + size; }
};

// Registers are laid out contiguously in this order: main, be_flag, qsvt_flag,
// lcu_select, indicator, pure ancillas.
class QubitLayout {
 public:
  QubitLayout() = default;
  QubitLayout(int main, int be_flag, int qsvt_flag, int lcu_select, int indicator,
              int pure_ancillas) {
    int sizes[6] = {main, be_flag, qsvt_flag, lcu_select, indicator, pure_ancillas};
    int at = 0;
    for (int i = 0; i < 6; ++i) {
      if (sizes[i] < 0) throw LayoutError("negative register size");
      ranges_[i] = QubitRange{at, sizes[i]};
      at += sizes[i];
    }
    if (be_flag > 1 || qsvt_flag > 1) throw LayoutError("flags hold at most one qubit");
    if (lcu_select > 2) throw LayoutError("selector holds at most two qubits");
  }

  const QubitRange& main() const { return ranges_[0]; }
  const QubitRange& be_flag() const { return ranges_[1]; }
  const QubitRange& qsvt_flag() const { return ranges_[2]; }
  const QubitRange& lcu_select() const { return ranges_[3]; }
  const QubitRange& indicator() const { return ranges_[4]; }
  const QubitRange& pure_ancillas() const { return ranges_[5]; }

  int width() const { return ranges_[5].first + ranges_[5].size; }

  // Qubits that must read zero after post-selection: both flags and the selector.
  std::vector<int> flag_qubits() const {
    std::vector<int> v;
    for (int i = 1; i <= 3; ++i)
      for (int q : ranges_[i].qubits()) v.push_back(q);
    return v;
  }

  bool operator==(const QubitLayout& o) const {
    for (int i = 0; i < 6; ++i)
      if (ranges_[i].first != o.ranges_[i].first || ranges_[i].size != o.ranges_[i].size) return false;
    return true;
  }

 private:
  QubitRange ranges_[6];
};

struct Stage {
  std::string label;
  std::size_t begin = 0;
  std::size_t end = 0;
};

class Circuit {
 public:
  Circuit() = default;
  Circuit(QubitLayout layout, std::vector<Gate> gates, std::vector<Stage> stages = {})
      : layout_(layout), gates_(std::move(gates)), stages_(std::move(stages)) {
    for (const auto& g : gates_) g.validate(layout_.width());
  }

  const QubitLayout& layout() const { return layout_; }
  const std::vector<Gate>& gates() const { return gates_; }
  const std::vector<Stage>& stages() const { return stages_; }
  int width() const { return layout_.width(); }
  std::size_t size() const { return gates_.size(); }

  bool operator==(const Circuit& o) const { return layout_ == o.layout_ && gates_ == o.gates_; }

 private:
  QubitLayout layout_;
  std::vector<Gate> gates_;
  std::vector<Stage> stages_;
};

// Single-owner accumulator; build() hands the gates over to an immutable Circuit.
class Builder {
 public:
  explicit Builder(QubitLayout layout) : layout_(layout) {}

  const QubitLayout& layout() const { return layout_; }
  std::size_t size() const { return gates_.size(); }

  Builder& add(const Gate& g) {
    g.validate(layout_.width());
    gates_.push_back(g);
    return *this;
  }
  Builder& rot(GateKind k, int q, double a) { return add(Gate{k, q, -1, -1, a}); }
  Builder& rx(int q, double a) { return rot(GateKind::RX, q, a); }
  Builder& ry(int q, double a) { return rot(GateKind::RY, q, a); }
  Builder& rz(int q, double a) { return rot(GateKind::RZ, q, a); }
  Builder& phase(int q, double a) { return rot(GateKind::PHASE, q, a); }
  Builder& h(int q) { return add(Gate{GateKind::H, q}); }
  Builder& x(int q) { return add(Gate{GateKind::X, q}); }
  Builder& y(int q) { return add(Gate{GateKind::Y, q}); }
  Builder& z(int q) { return add(Gate{GateKind::Z, q}); }
  Builder& s(int q) { return add(Gate{GateKind::S, q}); }
  Builder& sdg(int q) { return add(Gate{GateKind::SDG, q}); }
  Builder& cx(int c, int t) { return add(Gate{GateKind::CX, t, c}); }
  Builder& ccx(int a, int b, int t) { return add(Gate{GateKind::CCX, t, a, b}); }
  Builder& cz(int c, int t) { return h(t).cx(c, t).h(t); }

  Builder& append(const Circuit& c) {
    if (!(c.layout() == layout_)) throw LayoutError("append: layout mismatch");
    std::size_t off = gates_.size();
    gates_.insert(gates_.end(), c.gates().begin(), c.gates().end());
    for (const auto& st : c.stages()) stages_.push_back({st.label, st.begin + off, st.end + off});
    return *this;
  }

  // Stage spans; nesting is allowed and spans are reported as recorded.
  std::size_t begin_stage() const { return gates_.size(); }
  void end_stage(const std::string& label, std::size_t begin) {
    stages_.push_back({label, begin, gates_.size()});
  }

  Circuit build() && { return Circuit(layout_, std::move(gates_), std::move(stages_)); }
  Circuit snapshot() const { return Circuit(layout_, gates_, stages_); }

 private:
  QubitLayout layout_;
  std::vector<Gate> gates_;
  std::vector<Stage> stages_;
};

struct GateCensus {
  long long one_qubit_ops = 0;
  long long cnots = 0;
  long long native_gates = 0;
  long long toffolis = 0;

  GateCensus& operator+=(const GateCensus& o) {
    one_qubit_ops += o.one_qubit_ops;
    cnots += o.cnots;
    native_gates += o.native_gates;
    toffolis += o.toffolis;
    return *this;
  }
  GateCensus operator-(const GateCensus& o) const {
    return {one_qubit_ops - o.one_qubit_ops, cnots - o.cnots, native_gates - o.native_gates,
            toffolis - o.toffolis};
  }
  GateCensus scaled(long long k) const {
    return {k * one_qubit_ops, k * cnots, k * native_gates, k * toffolis};
  }
};

inline GateCensus census(const Gate& g) {
  GateCensus c;
  c.native_gates = 1;
  switch (g.kind) {
    case GateKind::CX: c.cnots = 1; break;
    case GateKind::CCX:
      c.one_qubit_ops = 8;
      c.cnots = 6;
      c.toffolis = 1;
      break;
    default: c.one_qubit_ops = 1; break;
  }
  return c;
}

inline GateCensus census(const std::vector<Gate>& gates, std::size_t begin, std::size_t end) {
  GateCensus c;
  for (std::size_t i = begin; i < end; ++i) c += census(gates[i]);
  return c;
}

inline GateCensus census(const Circuit& c) { return census(c.gates(), 0, c.size()); }

inline GateCensus census(const Circuit& c, const Stage& st) { return census(c.gates(), st.begin, st.end); }

inline Circuit compose(const Circuit& a, const Circuit& b) {
  Builder bl(a.layout());
  bl.append(a).append(b);
  return std::move(bl).build();
}

inline Gate inverse(const Gate& g) {
  Gate r = g;
  if (is_rotation(g.kind)) r.angle = -g.angle;
  if (g.kind == GateKind::S) r.kind = GateKind::SDG;
  if (g.kind == GateKind::SDG) r.kind = GateKind::S;
  if (r.angle == 0.0) r.angle = 0.0;  // no negative zero
  return r;
}

inline Circuit adjoint(const Circuit& c) {
  std::vector<Gate> g;
  g.reserve(c.size());
  for (auto it = c.gates().rbegin(); it != c.gates().rend(); ++it) g.push_back(inverse(*it));
  std::vector<Stage> st;
  std::size_t n = c.size();
  for (const auto& s : c.stages()) st.push_back({s.label, n - s.end, n - s.begin});
  return Circuit(c.layout(), std::move(g), std::move(st));
}

// Appends the gate `g` controlled on `ctrl` (active when ctrl reads 1). A
// controlled CCX needs a clean ancilla; none given means a LayoutError.
inline void append_controlled(Builder& b, const Gate& g, int ctrl, std::optional<int> ancilla) {
  if (g.touches(ctrl)) throw LayoutError("control qubit is used by the circuit");
  const int t = g.target;
  switch (g.kind) {
    case GateKind::RY:
    case GateKind::RZ:
      b.rot(g.kind, t, g.angle / 2).cx(ctrl, t).rot(g.kind, t, -g.angle / 2).cx(ctrl, t);
      break;
    case GateKind::RX:
      b.h(t).rz(t, g.angle / 2).cx(ctrl, t).rz(t, -g.angle / 2).cx(ctrl, t).h(t);
      break;
    case GateKind::PHASE:
      b.phase(ctrl, g.angle / 2).cx(ctrl, t).phase(t, -g.angle / 2).cx(ctrl, t).phase(t, g.angle / 2);
      break;
    case GateKind::S:
    case GateKind::SDG: {
      double a = g.kind == GateKind::S ? M_PI / 2 : -M_PI / 2;
      b.phase(ctrl, a / 2).cx(ctrl, t).phase(t, -a / 2).cx(ctrl, t).phase(t, a / 2);
      break;
    }
    case GateKind::H: b.ry(t, M_PI / 4).cx(ctrl, t).ry(t, -M_PI / 4); break;
    case GateKind::X: b.cx(ctrl, t); break;
    case GateKind::Y: b.sdg(t).cx(ctrl, t).s(t); break;
    case GateKind::Z: b.h(t).cx(ctrl, t).h(t); break;
    case GateKind::CX: b.ccx(ctrl, g.c0, t); break;
    case GateKind::CCX: {
      if (!ancilla) throw LayoutError("controlled CCX needs a clean ancilla");
      int a = *ancilla;
      if (g.touches(a) || a == ctrl) throw LayoutError("ancilla clashes with the gate");
      b.ccx(ctrl, g.c0, a).ccx(a, g.c1, t).ccx(ctrl, g.c0, a);
      break;
    }
  }
}

// Controlled version of a circuit. `active_on_one=false` fires on |0> via X
// conjugation of the control.
inline Circuit controlled(const Circuit& c, int ctrl, bool active_on_one = true,
                          std::optional<int> ancilla = std::nullopt) {
  Builder b(c.layout());
  if (ctrl < 0 || ctrl >= c.width()) throw LayoutError("control out of range");
  if (!active_on_one) b.x(ctrl);
  for (const auto& g : c.gates()) append_controlled(b, g, ctrl, ancilla);
  if (!active_on_one) b.x(ctrl);
  return std::move(b).build();
}

}  // namespace funcprep
