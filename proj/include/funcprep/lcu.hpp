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

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "funcprep/chebyshev.hpp"
#include "funcprep/circuit.hpp"
#include "funcprep/coordinate.hpp"
#include "funcprep/errors.hpp"
#include "funcprep/primitives.hpp"
#include "funcprep/qsvt.hpp"
#include "funcprep/simulator.hpp"

namespace funcprep {

inline constexpr double kSupMargin = 1.0 / 1024.0;  // P_s are scaled to sup 1 - 2^-10

enum class Basis { Monomial, Chebyshev };

// A truncated expansion f(x) = sum_j c_j B_j(x) with complex coefficients.
struct FunctionSpec {
  std::string name = "custom";
  Basis basis = Basis::Monomial;
  std::vector<std::complex<double>> coeffs;
  double epsilon = 0.0;    // truncation error bound, informational
  bool certified = true;  // false when epsilon is an estimate

  int degree() const {
    int d = static_cast<int>(coeffs.size()) - 1;
    while (d > 0 && coeffs[d] == 0.0) --d;
    return std::max(d, 0);
  }

  std::complex<double> operator()(double x) const {
    std::vector<double> re(coeffs.size()), im(coeffs.size());
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      re[j] = coeffs[j].real();
      im[j] = coeffs[j].imag();
    }
    if (basis == Basis::Monomial) return {cheb::eval_monomial(re, x), cheb::eval_monomial(im, x)};
    return {cheb::eval(re, x), cheb::eval(im, x)};
  }
};

// Branch s: 0 real odd, 1 real even, 2 imaginary odd, 3 imaginary even.
struct FourPolySplit {
  std::array<std::optional<ParityPolynomial>, 4> P;
  std::array<double, 4> alpha{0.0, 0.0, 0.0, 0.0};
  int degree = 0;
  double scale = 0.0;  // s * sqrt(2): g(y) = f(scale * y)

  double alpha_sum() const { return alpha[0] + alpha[1] + alpha[2] + alpha[3]; }
  bool present(int s) const { return P[s].has_value(); }
};

inline bool branch_is_even(int s) { return s & 1; }
inline bool branch_is_imag(int s) { return s >> 1; }

// g(y) = f(s sqrt(2) y) split into real/imaginary and odd/even parts, each
// scaled to sup-norm 1 - 2^-10 on [-1, 1].
// A zero function is accepted only with `allow_zero` (an empty piece).
inline FourPolySplit decompose_four(const FunctionSpec& f, const CoordinateGrid& g, bool allow_zero = false) {
  const int Q = f.degree();
  if (Q > kMaxDegree) throw DomainError("degree exceeds the cap of 200");
  FourPolySplit out;
  out.degree = Q;
  out.scale = g.s * std::sqrt(2.0);
  std::vector<double> re = cheb::interpolate([&](double y) { return f(out.scale * y).real(); }, Q);
  std::vector<double> im = cheb::interpolate([&](double y) { return f(out.scale * y).imag(); }, Q);
  double mag = 0.0;
  for (double v : re) mag = std::max(mag, std::abs(v));
  for (double v : im) mag = std::max(mag, std::abs(v));
  if (mag == 0.0) {
    if (allow_zero) return out;
    throw DomainError("function vanishes identically");
  }
  for (int s = 0; s < 4; ++s) {
    const auto& src = branch_is_imag(s) ? im : re;
    const int par = branch_is_even(s) ? 0 : 1;
    std::vector<double> part(Q + 1, 0.0);
    double pm = 0.0;
    for (int j = par; j <= Q; j += 2) {
      part[j] = src[j];
      pm = std::max(pm, std::abs(src[j]));
    }
    if (pm <= 1e-13 * mag) continue;
    const double sup = cheb::sup_norm(part, std::max<std::size_t>(20001, 40 * part.size()));
    out.alpha[s] = sup / (1.0 - kSupMargin);
    for (auto& v : part) v /= out.alpha[s];
    out.P[s] = ParityPolynomial::make(part);
  }
  return out;
}

// Scales a split to a larger common alpha sum by shrinking its polynomials.
inline FourPolySplit renormalized(const FourPolySplit& in, double total) {
  const double own = in.alpha_sum();
  if (own == 0.0) return in;
  if (total < own * (1 - 1e-15)) throw DomainError("common normalization below a piece's own");
  FourPolySplit out = in;
  const double r = own / total;
  for (int s = 0; s < 4; ++s) {
    if (!in.present(s)) continue;
    auto c = in.P[s]->cheb();
    for (auto& v : c) v *= r;
    out.P[s] = ParityPolynomial::make(c);
    out.alpha[s] = in.alpha[s] / r;
  }
  return out;
}

enum class OracleMode { Sharing, Fallback };

struct AssemblyOptions {
  OracleMode mode = OracleMode::Sharing;
  SolverOptions solver;
};

// Which selector bits exist: lo distinguishes parity, hi real/imaginary.
struct SelectorShape {
  bool lo = false, hi = false;
  int lo_value = 0, hi_value = 0;  // the fixed value when a bit is absent
  int size() const { return (lo ? 1 : 0) + (hi ? 1 : 0); }
};

inline SelectorShape selector_shape(const std::vector<FourPolySplit>& pieces) {
  bool odd = false, even = false, re = false, im = false;
  for (const auto& p : pieces)
    for (int s = 0; s < 4; ++s)
      if (p.present(s)) {
        (branch_is_even(s) ? even : odd) = true;
        (branch_is_imag(s) ? im : re) = true;
      }
  SelectorShape sh;
  sh.lo = odd && even;
  sh.hi = re && im;
  sh.lo_value = even ? 1 : 0;
  sh.hi_value = im ? 1 : 0;
  return sh;
}

// Selector amplitudes sqrt(w_s) for weights w (sum 1). `ind` are extra
// multiplexing controls; tables[j] holds the weights for control pattern j.
inline void append_selector_prep(Builder& b, const SelectorShape& sh, std::optional<int> lo, std::optional<int> hi,
                                 const std::vector<int>& ind, const std::vector<std::array<double, 4>>& tables) {
  const std::size_t P = std::size_t{1} << ind.size();
  if (tables.size() != P) throw LayoutError("selector table size mismatch");
  auto ang = [](double w1, double w0) { return 2.0 * std::atan2(std::sqrt(std::max(w1, 0.0)), std::sqrt(std::max(w0, 0.0))); };
  if (sh.hi) {
    std::vector<double> t(P);
    for (std::size_t j = 0; j < P; ++j) t[j] = ang(tables[j][2] + tables[j][3], tables[j][0] + tables[j][1]);
    mux_rotation(b, GateKind::RY, ind, *hi, t);
  }
  if (sh.lo) {
    std::vector<int> c = ind;
    if (sh.hi) c.push_back(*hi);
    std::vector<double> t(std::size_t{1} << c.size());
    for (std::size_t j = 0; j < P; ++j) {
      const auto& w = tables[j];
      if (sh.hi) {
        t[j] = ang(w[1], w[0]);
        t[j | P] = ang(w[3], w[2]);
      } else {
        t[j] = ang(w[1] + w[3], w[0] + w[2]);
      }
    }
    mux_rotation(b, GateKind::RY, c, *lo, t);
  }
}

// U_alpha for one function: amplitudes sqrt(alpha_s / sum alpha) on the
// selector. Layout: selector only.
inline Circuit prepare_alpha(const std::array<double, 4>& alpha) {
  FourPolySplit sp;
  sp.alpha = alpha;
  for (int s = 0; s < 4; ++s)
    if (alpha[s] > 0) sp.P[s] = ParityPolynomial::make({0.0});
  auto sh = selector_shape({sp});
  QubitLayout l(0, 0, 0, sh.size(), 0, 0);
  Builder b(l);
  std::optional<int> lo, hi;
  int at = 0;
  if (sh.lo) lo = l.lcu_select()[at++];
  if (sh.hi) hi = l.lcu_select()[at++];
  const double tot = sp.alpha_sum();
  std::array<double, 4> w{};
  for (int s = 0; s < 4; ++s) w[s] = alpha[s] / tot;
  append_selector_prep(b, sh, lo, hi, {}, {w});
  return std::move(b).build();
}

// Optional thermometer indicator hooks used by the piecewise assembler.
struct IndicatorHooks {
  int bits = 0;
  std::function<void(Builder&, const std::vector<int>& ind, const std::vector<int>& pool)> compute;
  std::function<void(Builder&, const std::vector<int>& ind, const std::vector<int>& pool)> uncompute;
  std::function<std::size_t(std::size_t piece)> pattern;  // indicator pattern of each piece
  int pool_needed = 0;
};

struct UfCircuit {
  Circuit circuit;
  CoordinateGrid grid;
  std::vector<FourPolySplit> pieces;
  SelectorShape selector;
  int q_odd = 0, q_even = 0;
  double alpha_total = 0.0;
  std::vector<std::array<std::vector<double>, 4>> phases;
  std::vector<std::array<double, 4>> phase_residuals;
  int solver_restarts = 0;
  OracleMode mode = OracleMode::Sharing;
  std::vector<int> flags, pure, work, indicator, main;
};

namespace detail {

inline int largest_with_parity(int Q, int parity) {
  int q = (Q % 2 == parity) ? Q : Q - 1;
  if (parity == 1) return std::max(q, 1);
  return std::max(q, 2);
}

}  // namespace detail

// Shared assembly of one or more pieces on a common grid.
inline UfCircuit assemble_pieces(const CoordinateGrid& grid, std::vector<FourPolySplit> pieces,
                                 const IndicatorHooks& hooks, const AssemblyOptions& opt) {
  const int n = grid.n;
  const int G = static_cast<int>(pieces.size());
  if (G < 1) throw DomainError("no pieces");
  if (hooks.bits != G - 1) throw LayoutError("indicator width must be pieces-1");
  if (opt.mode == OracleMode::Fallback && G > 1) throw DomainError("fallback mode is single-function only");

  UfCircuit out;
  out.grid = grid;
  out.mode = opt.mode;
  double total = 0.0;
  for (const auto& p : pieces) total = std::max(total, p.alpha_sum());
  for (auto& p : pieces) p = renormalized(p, total);
  out.alpha_total = total;
  out.selector = selector_shape(pieces);
  const auto& sh = out.selector;

  int Qmax = 0;
  bool any_odd = false, any_even = false;
  for (const auto& p : pieces) {
    Qmax = std::max(Qmax, p.degree);
    for (int s = 0; s < 4; ++s)
      if (p.present(s)) (branch_is_even(s) ? any_even : any_odd) = true;
  }
  out.q_odd = any_odd ? detail::largest_with_parity(Qmax, 1) : 0;
  out.q_even = any_even ? detail::largest_with_parity(Qmax, 0) : 0;
  const int q_max = std::max(out.q_odd, out.q_even);
  const int q_min = (any_odd && any_even) ? std::min(out.q_odd, out.q_even) : q_max;

  if (total == 0.0) throw DomainError("every piece vanishes identically");
  // an empty piece rides on one existing branch with phases realizing i*T_q, whose real part is zero
  auto usable = [&](int s) {
    return (branch_is_even(s) ? any_even : any_odd) && (sh.hi || (branch_is_imag(s) ? 1 : 0) == sh.hi_value);
  };
  int filler = 0;
  while (!usable(filler)) ++filler;
  out.phases.resize(G);
  out.phase_residuals.resize(G);
  for (int gi = 0; gi < G; ++gi)
    if (pieces[gi].alpha_sum() == 0.0) {
      auto ph = chebyshev_phases(branch_is_even(filler) ? out.q_even : out.q_odd);
      ph[0] += M_PI / 2;
      out.phases[gi][filler] = ph;
      out.phase_residuals[gi][filler] = 0.0;
      pieces[gi].alpha[filler] = total;
    }
  for (int gi = 0; gi < G; ++gi)
    for (int s = 0; s < 4; ++s) {
      out.phase_residuals[gi][s] = 0.0;
      if (!pieces[gi].present(s)) continue;
      int q = branch_is_even(s) ? out.q_even : out.q_odd;
      auto ps = find_phases(pieces[gi].P[s]->padded(q), opt.solver);
      out.phases[gi][s] = ps.phases;
      out.phase_residuals[gi][s] = ps.residual;
      out.solver_restarts += ps.restarts;
    }
  out.pieces = pieces;

  const bool fallback = opt.mode == OracleMode::Fallback;
  int pool_size = std::max({coordinate_pool_size(n), hooks.pool_needed, 0});
  if (fallback && sh.size() == 2) pool_size = std::max(pool_size, coordinate_pool_size(n) + 1);
  QubitLayout l(n, 1, 1, sh.size(), G - 1, n + 1 + pool_size);
  auto w = coordinate_wires(l, n);
  w.borrow = w.main[0];
  const int flag = w.lcu, qsvt = l.qsvt_flag()[0];
  std::optional<int> lo, hi;
  {
    int at = 0;
    if (sh.lo) lo = l.lcu_select()[at++];
    if (sh.hi) hi = l.lcu_select()[at++];
  }
  const std::vector<int> ind = l.indicator().qubits();
  const auto ucs = coordinate_ucs(l, w, walsh_coefficients(grid));
  Builder ob(l);
  append_diagonal_encoding(ob, w, ucs, M_PI / 4);
  const auto O = oracle_gates(std::move(ob).build().gates(), flag);

  // selector weights per indicator pattern
  const std::size_t P = std::size_t{1} << (G - 1);
  std::vector<std::array<double, 4>> tables(P, std::array<double, 4>{1.0, 0.0, 0.0, 0.0});
  std::vector<int> piece_of(P, -1);
  for (int gi = 0; gi < G; ++gi) {
    std::size_t pat = G > 1 ? hooks.pattern(gi) : 0;
    piece_of[pat] = gi;
    for (int s = 0; s < 4; ++s) tables[pat][s] = pieces[gi].alpha[s] / total;
  }
  // branch index of selector state (lo, hi)
  auto branch_of = [&](int lo_bit, int hi_bit) { return lo_bit | (hi_bit << 1); };

  Builder b(l);
  auto st = b.begin_stage();
  for (int q : w.main) b.h(q);
  b.end_stage("hadamard", st);
  if (G > 1) {
    st = b.begin_stage();
    hooks.compute(b, ind, w.pool);
    b.end_stage("indicator", st);
  }
  st = b.begin_stage();
  append_selector_prep(b, sh, lo, hi, ind, tables);
  const std::size_t prep_begin = st, prep_end = b.size();
  b.end_stage("prepare_alpha", st);

  // mux controls for per-branch phases: indicator bits, then lo, then hi
  std::vector<int> mc = ind;
  if (sh.lo) mc.push_back(*lo);
  if (sh.hi) mc.push_back(*hi);
  auto phase_table = [&](int t) {
    std::vector<double> tab(std::size_t{1} << mc.size(), 0.0);
    for (std::size_t j = 0; j < tab.size(); ++j) {
      std::size_t pat = j & (P - 1);
      std::size_t rest = j >> (G - 1);
      int lo_bit = sh.lo ? static_cast<int>(rest & 1) : sh.lo_value;
      int hi_bit = sh.hi ? static_cast<int>((rest >> (sh.lo ? 1 : 0)) & 1) : sh.hi_value;
      int gi = piece_of[pat];
      if (gi < 0) continue;
      int s = branch_of(lo_bit, hi_bit);
      const auto& ph = out.phases[gi][s];
      int q = static_cast<int>(ph.size());
      if (t <= q) tab[j] = -2.0 * ph[q - t];
    }
    return tab;
  };

  if (!fallback) {
    b.h(qsvt);
    for (int t = 1; t <= q_max; ++t) {
      st = b.begin_stage();
      const auto& seq = t % 2 ? O.forward : O.backward;
      if (t <= q_min) {
        for (const auto& gte : seq) b.add(gte);
        b.end_stage("amplitude_oracle_x", st);
      } else {
        // only the longer parity class continues
        const int longer = out.q_even > out.q_odd ? 1 : 0;
        Builder cb(l);
        append_diagonal_encoding(cb, w, ucs, M_PI / 4, 0, ControlSpec{*lo, longer == 1});
        auto cg = std::move(cb).build().gates();
        if (t % 2 == 0) cg = detail::adjoint_gates(cg);
        for (const auto& gte : cg) b.add(gte);
        b.end_stage("parity_fix", st);
      }
      st = b.begin_stage();
      b.cx(qsvt, flag);
      mux_rotation(b, GateKind::RZ, mc, flag, phase_table(t));
      b.cx(qsvt, flag);
      b.end_stage("phases", st);
    }
    b.h(qsvt);
  } else {
    // each branch runs its own controlled polynomial oracle
    const int and_anc = sh.size() == 2 ? w.pool.back() : -1;
    EncodingWires cw = w;
    if (and_anc >= 0) cw.pool.pop_back();
    for (int s = 0; s < 4; ++s) {
      if (!pieces[0].present(s)) continue;
      const int lo_bit = branch_is_even(s) ? 1 : 0, hi_bit = branch_is_imag(s) ? 1 : 0;
      ControlPattern pat;
      if (sh.lo) pat.push_back({*lo, lo_bit == 1});
      if (sh.hi) pat.push_back({*hi, hi_bit == 1});
      std::optional<ControlSpec> ctrl;
      if (pat.size() == 2) {
        detail::flip_zero_bits(b, pat);
        b.ccx(pat[0].qubit, pat[1].qubit, and_anc);
        detail::flip_zero_bits(b, pat);
        ctrl = ControlSpec{and_anc, true};
      } else if (pat.size() == 1) {
        ctrl = ControlSpec{pat[0].qubit, pat[0].value};
      }
      const auto& ph = out.phases[0][s];
      const int q = static_cast<int>(ph.size());
      std::vector<Gate> cf, cbk;
      if (ctrl) {
        Builder cb(l);
        append_diagonal_encoding(cb, cw, ucs, M_PI / 4, 0, ctrl);
        cf = std::move(cb).build().gates();
        cbk = detail::adjoint_gates(cf);
      }
      b.h(qsvt);
      for (int t = 1; t <= q; ++t) {
        st = b.begin_stage();
        const auto& seq = ctrl ? (t % 2 ? cf : cbk) : (t % 2 ? O.forward : O.backward);
        for (const auto& gte : seq) b.add(gte);
        b.end_stage("amplitude_oracle_x", st);
        st = b.begin_stage();
        b.cx(qsvt, flag);
        if (ctrl)
          controlled_rotation(b, GateKind::RZ, ctrl->qubit, ctrl->value, flag, -2.0 * ph[q - t]);
        else
          b.rz(flag, -2.0 * ph[q - t]);
        b.cx(qsvt, flag);
        b.end_stage("phases", st);
      }
      b.h(qsvt);
      if (pat.size() == 2) {
        detail::flip_zero_bits(b, pat);
        b.ccx(pat[0].qubit, pat[1].qubit, and_anc);
        detail::flip_zero_bits(b, pat);
      }
    }
  }
  if (sh.hi) b.s(*hi);
  st = b.begin_stage();
  {
    auto snap = b.snapshot().gates();
    std::vector<Gate> prep(snap.begin() + prep_begin, snap.begin() + prep_end);
    for (const auto& gte : detail::adjoint_gates(prep)) b.add(gte);
  }
  b.end_stage("prepare_alpha_dagger", st);
  if (G > 1) {
    st = b.begin_stage();
    hooks.uncompute(b, ind, w.pool);
    b.end_stage("indicator_dagger", st);
  }
  out.circuit = std::move(b).build();
  out.flags = l.flag_qubits();
  out.pure = w.pool;
  out.work = w.work;
  out.work.push_back(w.copy);
  out.indicator = ind;
  out.main = w.main;
  return out;
}

// U_f for a single function on the grid.
inline UfCircuit assemble_uf(const FunctionSpec& f, const CoordinateGrid& g, const AssemblyOptions& opt = {}) {
  return assemble_pieces(g, {decompose_four(f, g)}, IndicatorHooks{}, opt);
}

// Post-selection probability predicted without simulation.
inline double predicted_success(const UfCircuit& u, const std::function<std::complex<double>(double)>& target) {
  double acc = 0.0;
  for (double x : u.grid.x) acc += std::norm(target(x));
  return acc / (static_cast<double>(u.grid.points()) * u.alpha_total * u.alpha_total);
}

struct SimulationOutcome {
  double success_probability = 0.0;
  double fidelity = 0.0;
  double pure_leakage = 0.0;       // pool and indicator, full state
  double work_sector_leakage = 0.0;  // work/copy inside the flag-zero sector
  double work_full_leakage = 0.0;    // work/copy over the full state
  std::vector<std::complex<double>> post_state;  // main register, normalized
};

inline SimulationOutcome simulate_uf(const UfCircuit& u, const std::vector<std::complex<double>>& target) {
  auto s = run(u.circuit);
  SimulationOutcome o;
  std::vector<int> pure = u.pure;
  pure.insert(pure.end(), u.indicator.begin(), u.indicator.end());
  o.pure_leakage = verify_pure_ancillas(s, pure);
  o.work_sector_leakage = sector_leakage(s, u.work, u.flags);
  o.work_full_leakage = verify_pure_ancillas(s, u.work);
  auto p = project_zero(s, u.flags);
  o.success_probability = p.probability;
  o.post_state = restrict_to(p.state, u.main);
  double nrm = 0.0;
  for (auto& a : o.post_state) nrm += std::norm(a);
  for (auto& a : o.post_state) a /= std::sqrt(nrm);
  if (!target.empty()) o.fidelity = fidelity(o.post_state, target);
  return o;
}

}  // namespace funcprep
