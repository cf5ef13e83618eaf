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

#include <cmath>
#include <optional>
#include <vector>

#include "funcprep/circuit.hpp"
#include "funcprep/errors.hpp"
#include "funcprep/primitives.hpp"

namespace funcprep {

// Uniform grid x_k = a + k*dx on 2^n points, normalized by s = ||x||.
struct CoordinateGrid {
  int n = 0;
  double a = 0.0, b = 0.0;
  double dx = 0.0;
  double s = 0.0;
  double shift = 0.0;  // nonzero when the interval was nudged off a zero beta_0
  std::vector<double> x;
  std::vector<double> xhat;

  std::size_t points() const { return x.size(); }
};

inline constexpr double kBeta0Floor = 1e-8;
inline constexpr double kBeta0Nudge = 1e-9;

namespace detail {

inline void fill_grid(CoordinateGrid& g) {
  const std::size_t N = std::size_t{1} << g.n;
  g.dx = (g.b - g.a) / static_cast<double>(N - 1);
  g.x.resize(N);
  g.xhat.resize(N);
  double ss = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    g.x[k] = g.a + g.dx * static_cast<double>(k);
    ss += g.x[k] * g.x[k];
  }
  g.s = std::sqrt(ss);
  for (std::size_t k = 0; k < N; ++k) g.xhat[k] = g.x[k] / g.s;
}

}  // namespace detail

inline CoordinateGrid make_grid(int n, double a, double b) {
  if (n < 1 || n > 20) throw DomainError("grid size n must lie in [1, 20]");
  if (!(a > -1.0 && a < b && b < 1.0)) throw DomainError("grid interval must satisfy -1 < a < b < 1");
  CoordinateGrid g;
  g.n = n;
  g.a = a;
  g.b = b;
  detail::fill_grid(g);
  // beta_0 is proportional to a + b
  double beta0 = std::pow(2.0, 0.5 * n) * (g.a + g.b) / (2.0 * g.s);
  if (std::abs(beta0) < kBeta0Floor) {
    g.shift = kBeta0Nudge * (b - a);
    g.a = a + g.shift;
    g.b = b + g.shift;
    if (!(g.b < 1.0)) throw DomainError("grid interval too close to 1 to nudge");
    detail::fill_grid(g);
  }
  return g;
}

// beta[0] = beta_0 and beta[j+1] = beta_{2^j}: the only nonzero Walsh
// coefficients of a linear amplitude profile.
struct WalshProfile {
  int n = 0;
  std::vector<double> beta;
};

inline WalshProfile walsh_coefficients(const CoordinateGrid& g) {
  WalshProfile p;
  p.n = g.n;
  p.beta.resize(g.n + 1);
  const double scale = std::pow(2.0, -0.5 * g.n);
  double sum = 0.0;
  for (double v : g.xhat) sum += v;
  p.beta[0] = scale * sum;
  for (int j = 0; j < g.n; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < g.points(); ++k) acc += ((k >> j) & 1) ? -g.xhat[k] : g.xhat[k];
    p.beta[j + 1] = scale * acc;
  }
  return p;
}

// Rotation angles omega_0..omega_{n-1} of the binary-norm preparation, for
// the profile with beta_0 made positive.
inline std::vector<double> binary_norm_angles(const WalshProfile& p) {
  const int n = p.n;
  const double sgn = p.beta[0] < 0 ? -1.0 : 1.0;
  const double b0 = sgn * p.beta[0];
  if (b0 == 0.0) throw DomainError("beta_0 vanishes; the grid must be nudged first");
  std::vector<double> w(n);
  double prod = 1.0;
  for (int k = n - 1; k >= 0; --k) {
    w[k] = 2.0 * std::atan2(prod * sgn * p.beta[k + 1], b0);
    prod *= std::cos(w[k] / 2.0);
  }
  return w;
}

struct ControlSpec {
  int qubit;
  bool value;
};

// A_psi on `work`: |0> -> beta_0|0> + sum_j beta_{2^j}|2^j>. n<=3 uses
// multiplexed rotations, larger n a flipped-frame AND ladder on n-2 pool
// ancillas. With `ctrl` the preparation fires only when ctrl reads its value.
inline void binary_norm_state_prep(Builder& b, const std::vector<int>& work, const WalshProfile& p,
                                   const std::vector<int>& pool, std::optional<ControlSpec> ctrl = {}) {
  const int n = p.n;
  if (static_cast<int>(work.size()) != n) throw LayoutError("work register size differs from n");
  const auto w = binary_norm_angles(p);
  const double sign_fix = p.beta[0] < 0 ? 2.0 * M_PI : 0.0;  // RY(t + 2pi) = -RY(t)

  auto first_rotation = [&](double theta) {
    if (ctrl)
      controlled_rotation(b, GateKind::RY, ctrl->qubit, ctrl->value, work[0], theta);
    else
      b.ry(work[0], theta);
  };

  if (n <= 3) {
    first_rotation(w[0] + sign_fix);
    for (int k = 1; k < n; ++k) {
      // rotate qubit k only when qubits 0..k-1 (and the control) are at rest
      std::vector<int> c(work.begin(), work.begin() + k);
      int rest = 0;
      if (ctrl) {
        c.push_back(ctrl->qubit);
        if (ctrl->value) rest |= 1 << k;
      }
      std::vector<double> table(std::size_t{1} << c.size(), 0.0);
      table[rest] = w[k];
      mux_rotation(b, GateKind::RY, c, work[k], table);
    }
    return;
  }

  if (static_cast<int>(pool.size()) < n - 2) throw LayoutError("binary-norm prep needs n-2 ancillas");
  // at-rest branches live on |1> until the unwind; a[k] = AND(q0..qk)
  auto a = [&](int k) { return k == 0 ? work[0] : pool[k - 1]; };
  first_rotation(M_PI - w[0] + sign_fix);
  for (int k = 1; k < n; ++k) {
    if (k >= 2) b.ccx(a(k - 2), work[k - 1], a(k - 1));
    double theta = k < n - 1 ? M_PI - w[k] : w[k];
    controlled_rotation(b, GateKind::RY, a(k - 1), true, work[k], theta);
  }
  b.ccx(a(n - 3), work[n - 2], a(n - 2));
  for (int k = n - 2; k >= 1; --k) {
    b.cx(a(k - 1), work[k]);
    if (k >= 2) b.ccx(a(k - 2), work[k - 1], a(k - 1));
  }
  if (!ctrl) {
    b.x(work[0]);
  } else {
    if (!ctrl->value) b.x(work[0]);
    b.cx(ctrl->qubit, work[0]);
  }
}

// U_x = H^n A_psi, preparing sum_k xhat_k |k> on `work`.
inline void coordinate_superposition(Builder& b, const std::vector<int>& work, const WalshProfile& p,
                                     const std::vector<int>& pool, std::optional<ControlSpec> ctrl = {}) {
  binary_norm_state_prep(b, work, p, pool, ctrl);
  if (!ctrl) {
    for (int q : work) b.h(q);
    return;
  }
  if (!ctrl->value) b.x(ctrl->qubit);
  for (int q : work) b.ry(q, M_PI / 4).cx(ctrl->qubit, q).ry(q, -M_PI / 4);
  if (!ctrl->value) b.x(ctrl->qubit);
}

// Qubits used by the diagonal block encoding.
struct EncodingWires {
  std::vector<int> main;
  std::vector<int> work;
  int copy = -1;
  int lcu = -1;
  int select_p = -1;  // second flag of the complex encoding, -1 otherwise
  std::vector<int> pool;
  std::optional<int> borrow;  // qubit in any state, used only by the controlled form
};

namespace detail {

// W = H~ S~^p U_Copy U_C^S RY~(theta); `ucs` applies U_S to work when copy reads 0.
inline void encoding_w(Builder& b, const EncodingWires& w, const std::vector<Gate>& ucs, double theta,
                       int fixed_p) {
  if (theta == M_PI / 2)
    b.h(w.copy);
  else
    b.ry(w.copy, theta);
  for (const auto& g : ucs) b.add(g);
  for (std::size_t j = 0; j < w.main.size(); ++j) b.ccx(w.copy, w.main[j], w.work[j]);
  if (w.select_p >= 0)
    append_controlled(b, Gate{GateKind::S, w.copy}, w.select_p, std::nullopt);
  else if (fixed_p == 1)
    b.s(w.copy);
  b.h(w.copy);
}

inline std::vector<Gate> adjoint_gates(const std::vector<Gate>& g) {
  std::vector<Gate> r;
  for (auto it = g.rbegin(); it != g.rend(); ++it) r.push_back(inverse(*it));
  return r;
}

}  // namespace detail

// U_(p) = (-Z_lcu) V^dag [C1 Z~ . W R W^dag . C0 Z~] V with V = W H_lcu. The
// lcu-zero block is diag(sin(theta) Re((-i)^p psi_k)). With `ctrl` the whole
// unitary is controlled; R then borrows `borrow`.
inline void append_diagonal_encoding(Builder& b, const EncodingWires& w, const std::vector<Gate>& ucs,
                                     double theta, int fixed_p = 0, std::optional<ControlSpec> ctrl = {}) {
  Builder wb(b.layout());
  detail::encoding_w(wb, w, ucs, theta, fixed_p);
  wb.h(w.lcu);
  const std::vector<Gate> V = std::move(wb).build().gates();
  const std::vector<Gate> Vd = detail::adjoint_gates(V);
  Builder wonly(b.layout());
  detail::encoding_w(wonly, w, ucs, theta, fixed_p);
  const std::vector<Gate> W = std::move(wonly).build().gates();
  const std::vector<Gate> Wd = detail::adjoint_gates(W);

  std::vector<int> refl = w.work;
  refl.push_back(w.copy);

  for (const auto& g : V) b.add(g);
  if (!ctrl) {
    b.x(w.lcu).cz(w.lcu, w.copy).x(w.lcu);
    for (const auto& g : Wd) b.add(g);
    for (int q : refl) b.x(q);
    mcz_ones(b, refl, w.pool);
    for (int q : refl) b.x(q);
    for (const auto& g : W) b.add(g);
    b.cz(w.lcu, w.copy);
    for (const auto& g : Vd) b.add(g);
    b.x(w.lcu).z(w.lcu).x(w.lcu);
    return;
  }
  const int c = ctrl->qubit;
  if (!ctrl->value) b.x(c);
  b.x(w.lcu).h(w.copy).ccx(c, w.lcu, w.copy).h(w.copy).x(w.lcu);
  for (const auto& g : Wd) b.add(g);
  std::vector<int> all = refl;
  all.insert(all.begin(), c);
  for (int q : refl) b.x(q);
  mcz_ones(b, all, w.pool, w.borrow);
  for (int q : refl) b.x(q);
  for (const auto& g : W) b.add(g);
  b.h(w.copy).ccx(c, w.lcu, w.copy).h(w.copy);
  for (const auto& g : Vd) b.add(g);
  b.x(w.lcu).cz(c, w.lcu).x(w.lcu);
  if (!ctrl->value) b.x(c);
}

// Structured U_C^S for the coordinate state: U_x on work when copy reads 0.
inline std::vector<Gate> coordinate_ucs(const QubitLayout& layout, const EncodingWires& w,
                                        const WalshProfile& p) {
  Builder b(layout);
  coordinate_superposition(b, w.work, p, w.pool, ControlSpec{w.copy, false});
  return std::move(b).build().gates();
}

// Generic U_C^S from a preparation circuit acting on work.
inline std::vector<Gate> generic_ucs(const Circuit& u_s, const EncodingWires& w) {
  std::optional<int> anc;
  if (!w.pool.empty()) anc = w.pool[0];
  return controlled(u_s, w.copy, false, anc).gates();
}

enum class EncodingMode { RealOnly, Complex };

struct BlockEncoding {
  Circuit circuit;
  double alpha = 1.0;
  std::vector<int> flags;
  std::vector<int> data;
  std::vector<int> pure;   // returned to |0> in every branch
  std::vector<int> work;   // returned to |0> within the flag-zero sector
  int ucs_calls = 0;
};

// Layout: main = data (h), be_flag = lcu, qsvt_flag = p-select (complex only),
// pure ancillas = work (h), copy, pool.
inline BlockEncoding diagonal_block_encoding(const Circuit& u_s, int h, EncodingMode mode) {
  const bool cx = mode == EncodingMode::Complex;
  const int pool = std::max(h - 2, 0);
  QubitLayout l(h, 1, cx ? 1 : 0, 0, 0, h + 1 + pool);
  if (u_s.width() > h) throw LayoutError("u_s must act on the first h qubits");
  // relocate u_s onto the work register
  const int work0 = l.pure_ancillas().first;
  std::vector<Gate> moved;
  for (auto g : u_s.gates()) {
    g.target += work0;
    if (g.c0 >= 0) g.c0 += work0;
    if (g.c1 >= 0) g.c1 += work0;
    moved.push_back(g);
  }
  Circuit us(l, moved);
  EncodingWires w;
  w.main = l.main().qubits();
  for (int j = 0; j < h; ++j) w.work.push_back(work0 + j);
  w.copy = work0 + h;
  for (int j = 0; j < pool; ++j) w.pool.push_back(w.copy + 1 + j);
  w.lcu = l.be_flag()[0];
  if (cx) w.select_p = l.qsvt_flag()[0];
  auto ucs = generic_ucs(us, w);
  Builder b(l);
  const double theta = cx ? M_PI / 2 : M_PI / 4;
  if (cx) b.h(w.select_p);
  append_diagonal_encoding(b, w, ucs, theta);
  if (cx) b.s(w.select_p).h(w.select_p);
  BlockEncoding be;
  be.circuit = std::move(b).build();
  be.alpha = cx ? 2.0 : std::sqrt(2.0);
  be.flags = l.flag_qubits();
  be.data = w.main;
  be.pure = w.pool;
  be.work = w.work;
  be.work.push_back(w.copy);
  be.ucs_calls = 4;
  return be;
}

// O_x uses work n, copy 1 and a pool of n-2 clean ancillas.
inline int coordinate_pool_size(int n) { return std::max(n - 2, 0); }

inline EncodingWires coordinate_wires(const QubitLayout& l, int n) {
  EncodingWires w;
  w.main = l.main().qubits();
  const int a0 = l.pure_ancillas().first;
  for (int j = 0; j < n; ++j) w.work.push_back(a0 + j);
  w.copy = a0 + n;
  for (int j = a0 + n + 1; j < l.width(); ++j) w.pool.push_back(j);
  w.lcu = l.be_flag()[0];
  return w;
}

// O_x: a (sqrt 2, 1, 0) block encoding of diag(xhat_k) on the main register.
inline BlockEncoding amplitude_oracle_x(const CoordinateGrid& g) {
  const int n = g.n;
  QubitLayout l(n, 1, 0, 0, 0, n + 1 + coordinate_pool_size(n));
  auto w = coordinate_wires(l, n);
  auto prof = walsh_coefficients(g);
  auto ucs = coordinate_ucs(l, w, prof);
  Builder b(l);
  auto st = b.begin_stage();
  append_diagonal_encoding(b, w, ucs, M_PI / 4);
  b.end_stage("amplitude_oracle_x", st);
  BlockEncoding be;
  be.circuit = std::move(b).build();
  be.alpha = std::sqrt(2.0);
  be.flags = {w.lcu};
  be.data = w.main;
  be.pure = w.pool;
  be.work = w.work;
  be.work.push_back(w.copy);
  be.ucs_calls = 4;
  return be;
}

}  // namespace funcprep
