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

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "funcprep/circuit.hpp"
#include "funcprep/errors.hpp"

namespace funcprep {

struct ControlBit {
  int qubit;
  bool value;  // fires when the qubit reads this value
};
using ControlPattern = std::vector<ControlBit>;

inline ControlPattern all_ones(const std::vector<int>& qubits) {
  ControlPattern p;
  for (int q : qubits) p.push_back({q, true});
  return p;
}

namespace detail {

inline void flip_zero_bits(Builder& b, const ControlPattern& p) {
  for (const auto& c : p)
    if (!c.value) b.x(c.qubit);
}

inline void check_distinct(const std::vector<int>& a, const std::vector<int>& b) {
  for (int x : a)
    for (int y : b)
      if (x == y) throw LayoutError("ancilla overlaps an operand qubit");
}

// AND ladder over `q` (all read as ones): writes the conjunction of q[0..i+1]
// into pool[i]. Returns the qubit holding the full conjunction.
inline int and_ladder(Builder& b, const std::vector<int>& q, const std::vector<int>& pool) {
  if (q.size() < 2) return q.empty() ? -1 : q[0];
  if (pool.size() < q.size() - 1) throw LayoutError("not enough ancillas for the control ladder");
  b.ccx(q[0], q[1], pool[0]);
  for (std::size_t i = 2; i < q.size(); ++i) b.ccx(pool[i - 2], q[i], pool[i - 1]);
  return pool[q.size() - 2];
}

inline void and_ladder_undo(Builder& b, const std::vector<int>& q, const std::vector<int>& pool) {
  if (q.size() < 2) return;
  for (std::size_t i = q.size() - 1; i >= 2; --i) b.ccx(pool[i - 2], q[i], pool[i - 1]);
  b.ccx(q[0], q[1], pool[0]);
}

}  // namespace detail

// X on `target` when every control reads one, with clean ancillas from `pool`
// (needs controls-2). 2m-3 Toffolis for m>=3 controls.
inline void mcx_ones(Builder& b, const std::vector<int>& controls, int target, const std::vector<int>& pool) {
  const std::size_t m = controls.size();
  if (m == 0) {
    b.x(target);
  } else if (m == 1) {
    b.cx(controls[0], target);
  } else if (m == 2) {
    b.ccx(controls[0], controls[1], target);
  } else {
    std::vector<int> head(controls.begin(), controls.end() - 1);
    int top = detail::and_ladder(b, head, pool);
    b.ccx(top, controls.back(), target);
    detail::and_ladder_undo(b, head, pool);
  }
}

// As mcx_ones but may borrow one qubit in an arbitrary state when the clean
// pool is one short.
inline void mcx_ones_borrow(Builder& b, const std::vector<int>& controls, int target,
                            const std::vector<int>& pool, std::optional<int> borrow) {
  const std::size_t m = controls.size();
  if (m <= 2 || pool.size() + 2 >= m) {
    mcx_ones(b, controls, target, pool);
    return;
  }
  if (!borrow || pool.size() + 3 < m) throw LayoutError("not enough ancillas for the control ladder");
  const int d = *borrow;
  std::vector<int> head(controls.begin(), controls.end() - 1);
  const int last = controls.back();
  b.ccx(d, last, target);
  mcx_ones(b, head, d, pool);
  b.ccx(d, last, target);
  mcx_ones(b, head, d, pool);
}

inline void mcx(Builder& b, const ControlPattern& p, int target, const std::vector<int>& pool) {
  std::vector<int> c;
  for (const auto& x : p) c.push_back(x.qubit);
  detail::flip_zero_bits(b, p);
  mcx_ones(b, c, target, pool);
  detail::flip_zero_bits(b, p);
}

// Phase -1 on the all-ones state of `qubits`.
inline void mcz_ones(Builder& b, const std::vector<int>& qubits, const std::vector<int>& pool,
                     std::optional<int> borrow = std::nullopt) {
  if (qubits.empty()) throw LayoutError("mcz on no qubits");
  const int t = qubits.back();
  std::vector<int> c(qubits.begin(), qubits.end() - 1);
  if (c.empty()) {
    b.z(t);
    return;
  }
  b.h(t);
  mcx_ones_borrow(b, c, t, pool, borrow);
  b.h(t);
}

// I - 2|0><0| on `qubits`; `pool` needs |qubits|-3 clean ancillas.
inline Circuit reflection_zero(const QubitLayout& layout, const std::vector<int>& qubits,
                               const std::vector<int>& pool) {
  detail::check_distinct(qubits, pool);
  Builder b(layout);
  for (int q : qubits) b.x(q);
  mcz_ones(b, qubits, pool);
  for (int q : qubits) b.x(q);
  return std::move(b).build();
}

// Runs `u` when every control matches its pattern value. The conjunction goes
// into a fresh ancilla (m-1 ancillas, 2(m-1) Toffolis), then `u` is
// controlled on it; a circuit containing CCX takes one further ancilla.
inline Circuit multi_control(const Circuit& u, const ControlPattern& p, const std::vector<int>& pool) {
  Builder b(u.layout());
  std::vector<int> ctrl;
  for (const auto& c : p) {
    for (const auto& g : u.gates())
      if (g.touches(c.qubit)) throw LayoutError("control qubit is used by the circuit");
    ctrl.push_back(c.qubit);
  }
  detail::check_distinct(ctrl, pool);
  bool has_ccx = false;
  for (const auto& g : u.gates()) {
    for (int a : pool)
      if (g.touches(a)) throw LayoutError("ancilla is used by the circuit");
    has_ccx |= g.kind == GateKind::CCX;
  }
  if (p.empty()) {
    b.append(u);
    return std::move(b).build();
  }
  if (u.size() == 1 && u.gates()[0].kind == GateKind::X) {
    // the last Toffoli of the ladder can hit the target directly
    mcx(b, p, u.gates()[0].target, pool);
    return std::move(b).build();
  }
  detail::flip_zero_bits(b, p);
  int c;
  std::size_t used;
  if (ctrl.size() == 1) {
    c = ctrl[0];
    used = 0;
  } else {
    c = detail::and_ladder(b, ctrl, pool);
    used = ctrl.size() - 1;
  }
  std::optional<int> extra;
  if (has_ccx) {
    if (pool.size() <= used) throw LayoutError("controlled CCX needs one more ancilla");
    extra = pool[used];
  }
  for (const auto& g : u.gates()) append_controlled(b, g, c, extra);
  if (ctrl.size() >= 2) detail::and_ladder_undo(b, ctrl, pool);
  detail::flip_zero_bits(b, p);
  return std::move(b).build();
}

// out ^= a OR b, via an X-conjugated Toffoli.
inline void or_gate(Builder& b, int a, int c, int out) {
  b.x(a).x(c).ccx(a, c, out).x(a).x(c).x(out);
}

// R(angle) on `target` when `ctrl` reads `value`; R is RY or RZ.
inline void controlled_rotation(Builder& b, GateKind kind, int ctrl, bool value, int target, double angle) {
  if (kind != GateKind::RY && kind != GateKind::RZ) throw LayoutError("controlled_rotation takes RY or RZ");
  const double h = angle / 2;
  b.rot(kind, target, h).cx(ctrl, target).rot(kind, target, value ? -h : h).cx(ctrl, target);
}

// Uniformly controlled rotation: R(angles[j]) on `target` when the controls
// spell j (controls[0] is the low bit). 2^k rotations and 2^k CX.
inline void mux_rotation(Builder& b, GateKind kind, const std::vector<int>& controls, int target,
                         const std::vector<double>& angles) {
  if (kind != GateKind::RY && kind != GateKind::RZ) throw LayoutError("mux_rotation takes RY or RZ");
  const std::size_t k = controls.size(), n = std::size_t{1} << k;
  if (angles.size() != n) throw LayoutError("mux_rotation: angle table size mismatch");
  if (k == 0) {
    b.rot(kind, target, angles[0]);
    return;
  }
  auto gray = [](std::size_t i) { return i ^ (i >> 1); };
  for (std::size_t i = 0; i < n; ++i) {
    double beta = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      beta += (__builtin_popcountll(j & gray(i)) & 1) ? -angles[j] : angles[j];
    beta /= static_cast<double>(n);
    b.rot(kind, target, beta);
    std::size_t diff = gray(i) ^ gray((i + 1) % n);
    b.cx(controls[__builtin_ctzll(diff)], target);
  }
}

}  // namespace funcprep
