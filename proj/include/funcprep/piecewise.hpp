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
#include <vector>

#include "funcprep/circuit.hpp"
#include "funcprep/coordinate.hpp"
#include "funcprep/errors.hpp"
#include "funcprep/lcu.hpp"

namespace funcprep {

// Writes [k >= kn] into `target` for k on `main` (little endian). The carry of
// k + ~kn + 1 is rippled upward: a zero bit of kn ORs in k_j, a one bit ANDs
// it. Interior ORs use De Morgan with k_j flipped in place. Uses <= n-2 pool
// qubits.
inline void append_comparator(Builder& b, const std::vector<int>& main, std::uint64_t kn, int target,
                              const std::vector<int>& pool) {
  const int n = static_cast<int>(main.size());
  if (n < 1 || kn >= (std::uint64_t{1} << n)) throw DomainError("comparator threshold out of range");
  if (kn == 0) {
    b.x(target);
    return;
  }
  int j0 = 0;
  while (!((kn >> j0) & 1)) ++j0;
  const int steps = n - 1 - j0;
  if (steps == 0) {
    b.cx(main[n - 1], target);
    return;
  }
  if (static_cast<int>(pool.size()) < steps - 1) throw LayoutError("comparator needs n-2 pool qubits");

  Builder cb(b.layout());
  for (int j = j0 + 1; j < n - 1; ++j)
    if (!((kn >> j) & 1)) cb.x(main[j]);
  int q = main[j0];
  bool neg = false;
  int out = -1;
  bool out_or = false;
  for (int j = j0 + 1, t = 0; j < n; ++j, ++t) {
    const bool is_or = !((kn >> j) & 1);
    if (j == n - 1) {
      // the top step writes k AND c, or k OR c as k ^ c ^ (k AND c)
      if (neg) cb.x(q);
      out = main[j];
      out_or = is_or;
      break;
    }
    if (neg != is_or) {
      cb.x(q);
      neg = is_or;
    }
    cb.ccx(main[j], q, pool[t]);
    q = pool[t];
    neg = is_or;
  }
  const std::vector<Gate> compute = std::move(cb).build().gates();
  for (const auto& g : compute) b.add(g);
  if (out_or) b.cx(out, target).cx(q, target);
  b.ccx(out, q, target);
  for (const auto& g : detail::adjoint_gates(compute)) b.add(g);
}

// Stand-alone comparator: main n, indicator 1, pool n-2.
inline Circuit comparator(std::uint64_t kn, int n) {
  QubitLayout l(n, 0, 0, 0, 1, std::max(n - 2, 0));
  Builder b(l);
  auto st = b.begin_stage();
  append_comparator(b, l.main().qubits(), kn, l.indicator()[0], l.pure_ancillas().qubits());
  b.end_stage("comparator", st);
  return std::move(b).build();
}

struct PiecewiseSpec {
  std::vector<FunctionSpec> pieces;
  std::vector<double> breakpoints;  // strictly increasing, inside (a, b)
};

// First grid index of each later piece: ceil((K - a) / dx) on the nominal grid.
inline std::vector<std::uint64_t> breakpoint_indices(const PiecewiseSpec& p, const CoordinateGrid& g) {
  if (p.pieces.empty()) throw DomainError("piecewise spec has no pieces");
  if (p.breakpoints.size() + 1 != p.pieces.size()) throw DomainError("need one breakpoint between each pair of pieces");
  const double a = g.a - g.shift, b = g.b - g.shift;
  std::vector<std::uint64_t> kn;
  for (std::size_t i = 0; i < p.breakpoints.size(); ++i) {
    const double K = p.breakpoints[i];
    if (!(K > a && K < b)) throw DomainError("breakpoint outside the interval");
    if (i && !(K > p.breakpoints[i - 1])) throw DomainError("breakpoints must increase strictly");
    kn.push_back(static_cast<std::uint64_t>(std::ceil((K - a) / g.dx - 1e-9)));
  }
  return kn;
}

inline std::size_t piece_of(const std::vector<std::uint64_t>& kn, std::uint64_t k) {
  std::size_t g = 0;
  while (g < kn.size() && k >= kn[g]) ++g;
  return g;
}

// Thermometer code: indicator g reads 1 iff k >= kn[g].
inline void append_interval_indicator(Builder& b, const std::vector<int>& main, const std::vector<std::uint64_t>& kn,
                                      const std::vector<int>& ind, const std::vector<int>& pool) {
  if (ind.size() != kn.size()) throw LayoutError("one indicator qubit per breakpoint");
  for (std::size_t g = 0; g < kn.size(); ++g) append_comparator(b, main, kn[g], ind[g], pool);
}

inline Circuit interval_indicator(const std::vector<std::uint64_t>& kn, int n) {
  QubitLayout l(n, 0, 0, 0, static_cast<int>(kn.size()), std::max(n - 2, 0));
  Builder b(l);
  auto st = b.begin_stage();
  append_interval_indicator(b, l.main().qubits(), kn, l.indicator().qubits(), l.pure_ancillas().qubits());
  b.end_stage("indicator", st);
  return std::move(b).build();
}

// U_f over G pieces: one shared oracle sequence with U_alpha and the phases
// multiplexed on the thermometer pattern 1^g 0^(G-1-g) of piece g.
inline UfCircuit assemble_piecewise(const PiecewiseSpec& p, const CoordinateGrid& grid, const AssemblyOptions& opt = {}) {
  const auto kn = breakpoint_indices(p, grid);
  std::vector<FourPolySplit> splits;
  for (const auto& f : p.pieces) splits.push_back(decompose_four(f, grid, true));
  IndicatorHooks hooks;
  hooks.bits = static_cast<int>(kn.size());
  if (hooks.bits > 0) {
    const int n = grid.n;
    hooks.pool_needed = std::max(n - 2, 0);
    hooks.compute = [n, kn](Builder& b, const std::vector<int>& ind, const std::vector<int>& pool) {
      std::vector<int> main;
      for (int j = 0; j < n; ++j) main.push_back(b.layout().main()[j]);
      append_interval_indicator(b, main, kn, ind, pool);
    };
    hooks.uncompute = [n, kn](Builder& b, const std::vector<int>& ind, const std::vector<int>& pool) {
      Builder tmp(b.layout());
      std::vector<int> main;
      for (int j = 0; j < n; ++j) main.push_back(b.layout().main()[j]);
      append_interval_indicator(tmp, main, kn, ind, pool);
      for (const auto& g : detail::adjoint_gates(std::move(tmp).build().gates())) b.add(g);
    };
    hooks.pattern = [](std::size_t g) { return (std::size_t{1} << g) - 1; };
  }
  return assemble_pieces(grid, std::move(splits), hooks, opt);
}

// Reference amplitudes f_{piece(k)}(x_k) on the grid.
inline std::vector<std::complex<double>> piecewise_values(const PiecewiseSpec& p, const CoordinateGrid& g) {
  const auto kn = breakpoint_indices(p, g);
  std::vector<std::complex<double>> v;
  for (std::uint64_t k = 0; k < g.points(); ++k) v.push_back(p.pieces[piece_of(kn, k)](g.x[k]));
  return v;
}

}  // namespace funcprep
