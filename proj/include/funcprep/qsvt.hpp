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

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <random>
#include <vector>

#include "funcprep/chebyshev.hpp"
#include "funcprep/circuit.hpp"
#include "funcprep/coordinate.hpp"
#include "funcprep/errors.hpp"

namespace funcprep {

inline constexpr int kMaxDegree = 200;

// Real polynomial of definite parity in the Chebyshev basis with |P| <= 1 on [-1, 1].
class ParityPolynomial {
 public:
  ParityPolynomial() = default;

  static ParityPolynomial make(std::vector<double> cheb, double tol = 1e-12) {
    while (cheb.size() > 1 && cheb.back() == 0.0) cheb.pop_back();
    if (cheb.empty()) cheb.push_back(0.0);
    ParityPolynomial p;
    p.degree_ = static_cast<int>(cheb.size()) - 1;
    if (p.degree_ > kMaxDegree) throw DomainError("degree exceeds the cap of 200");
    p.parity_ = p.degree_ % 2;
    double scale = 0.0;
    for (double v : cheb) scale = std::max(scale, std::abs(v));
    for (std::size_t j = 0; j < cheb.size(); ++j)
      if (static_cast<int>(j % 2) != p.parity_) {
        if (std::abs(cheb[j]) > tol * std::max(scale, 1.0)) throw DomainError("polynomial has mixed parity");
        cheb[j] = 0.0;
      }
    p.cheb_ = std::move(cheb);
    p.sup_ = cheb::sup_norm(p.cheb_);
    if (p.sup_ > 1.0 + 1e-12) throw DomainError("polynomial exceeds 1 in magnitude on [-1, 1]");
    return p;
  }

  // Pads to `degree` (same parity) without changing the values.
  ParityPolynomial padded(int degree) const {
    if (degree < degree_ || (degree - degree_) % 2) throw DomainError("cannot pad across parity");
    ParityPolynomial p = *this;
    p.cheb_.resize(degree + 1, 0.0);
    p.degree_ = degree;
    return p;
  }

  const std::vector<double>& cheb() const { return cheb_; }
  int degree() const { return degree_; }
  int parity() const { return parity_; }
  double sup_bound() const { return sup_; }
  bool strictly_bounded() const { return sup_ < 1.0; }
  double operator()(double x) const { return cheb::eval(cheb_, x); }

 private:
  std::vector<double> cheb_{0.0};
  int degree_ = 0;
  int parity_ = 0;
  double sup_ = 0.0;
};

// Phases in operator order: P(x) = <0| D(phi_0) R(x) D(phi_1) R(x) ... D(phi_{q-1}) R(x) |0>
// with R(x) = [[x, s], [s, -x]], s = sqrt(1 - x^2), D(phi) = diag(e^{i phi}, e^{-i phi}).
// In the circuit phi_{q-1} acts right after the first oracle call.
struct PhaseSequence {
  std::vector<double> phases;
  double residual = 0.0;
  int restarts = 0;
  int q() const { return static_cast<int>(phases.size()); }
};

using cx2 = std::array<std::complex<double>, 2>;

inline std::complex<double> realized_polynomial(const std::vector<double>& phases, double x) {
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  // apply to |0> from the right
  cx2 v{1.0, 0.0};
  for (std::size_t j = phases.size(); j-- > 0;) {
    cx2 r{x * v[0] + s * v[1], s * v[0] - x * v[1]};
    const auto e = std::polar(1.0, phases[j]);
    v = {e * r[0], std::conj(e) * r[1]};
  }
  return v[0];
}

namespace detail {

using M2 = Eigen::Matrix2cd;

inline M2 wx(double x) {
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  M2 m;
  m << x, std::complex<double>(0, s), std::complex<double>(0, s), x;
  return m;
}

inline M2 ez(double phi) {
  M2 m = M2::Zero();
  m(0, 0) = std::polar(1.0, phi);
  m(1, 1) = std::polar(1.0, -phi);
  return m;
}

// Symmetric W(x)-convention model: phases (t_0..t_{m-1}) mirrored to d+1 phases.
inline std::vector<double> mirror(const std::vector<double>& t, int d) {
  std::vector<double> phi(d + 1);
  for (int j = 0; j <= d; ++j) phi[j] = t[std::min(j, d - j)];
  return phi;
}

// Re <0|U|0> and its gradient in the free phases.
inline double wx_value(const std::vector<double>& phi, double x, std::vector<double>* grad, int m) {
  const int d = static_cast<int>(phi.size()) - 1;
  const M2 W = wx(x);
  std::vector<Eigen::RowVector2cd> L(d + 1);
  std::vector<Eigen::Vector2cd> R(d + 1);
  Eigen::RowVector2cd l(1.0, 0.0);
  for (int j = 0; j <= d; ++j) {
    L[j] = l;
    l = l * ez(phi[j]);
    if (j < d) l = l * W;
  }
  Eigen::Vector2cd r(1.0, 0.0);
  for (int j = d; j >= 0; --j) {
    R[j] = r;
    r = ez(phi[j]) * r;
    if (j > 0) r = W * r;
  }
  const double val = (l * Eigen::Vector2cd(1.0, 0.0))(0).real();
  if (grad) {
    grad->assign(m, 0.0);
    M2 iz = M2::Zero();
    iz(0, 0) = std::complex<double>(0, 1);
    iz(1, 1) = std::complex<double>(0, -1);
    for (int j = 0; j <= d; ++j) {
      double gj = (L[j] * (iz * ez(phi[j])) * R[j])(0).real();
      (*grad)[std::min(j, d - j)] += gj;
    }
  }
  return val;
}

// Convert symmetric W(x) phases to the reflection-convention sequence.
inline std::vector<double> to_reflection(const std::vector<double>& phi) {
  const int d = static_cast<int>(phi.size()) - 1;
  std::vector<double> psi(d);
  psi[0] = phi[0] + phi[d] + (d - 1) * M_PI / 2;
  for (int j = 1; j < d; ++j) psi[j] = phi[j] - M_PI / 2;
  for (auto& p : psi) p = std::remainder(p, 2 * M_PI);
  return psi;
}

inline double verify_residual(const ParityPolynomial& P, const std::vector<double>& psi) {
  const int q = static_cast<int>(psi.size());
  double worst = 0.0;
  for (double x : cheb::nodes(10 * q + 1))
    worst = std::max(worst, std::abs(realized_polynomial(psi, x).real() - P(x)));
  return worst;
}

}  // namespace detail

struct SolverOptions {
  double delta = 1e-8;
  unsigned seed = 7;
  int restarts = 24;
  int max_iterations = 80;
};

// Phases with Re realized_polynomial = P on [-1, 1]. Newton iterations on the
// symmetric W(x) model at the positive Chebyshev nodes, started from the
// standard zero-polynomial point, then from the Chebyshev point, then from
// seeded random perturbations.
inline PhaseSequence find_phases(const ParityPolynomial& P, const SolverOptions& opt = {}) {
  const int d = P.degree();
  if (d < 1) throw DomainError("phase solver needs degree >= 1");
  const int m = d / 2 + 1;
  std::vector<double> xs(m), fx(m);
  for (int j = 0; j < m; ++j) {
    xs[j] = std::cos((2.0 * j + 1.0) * M_PI / (4.0 * m));
    fx[j] = P(xs[j]);
  }
  std::mt19937 rng(opt.seed);
  std::normal_distribution<double> noise(0.0, 0.1);
  double best = INFINITY;
  std::vector<double> best_psi;

  auto residual_vec = [&](const std::vector<double>& t, Eigen::VectorXd& F, Eigen::MatrixXd* J) {
    auto phi = detail::mirror(t, d);
    std::vector<double> g;
    for (int j = 0; j < m; ++j) {
      F(j) = detail::wx_value(phi, xs[j], J ? &g : nullptr, m) - fx[j];
      if (J)
        for (int i = 0; i < m; ++i) (*J)(j, i) = g[i];
    }
  };

  for (int attempt = 0; attempt <= opt.restarts; ++attempt) {
    std::vector<double> t(m, 0.0);
    if (attempt != 1) t[0] = M_PI / 4;
    if (attempt >= 2)
      for (auto& v : t) v += noise(rng) * (1.0 + 0.1 * attempt);
    Eigen::VectorXd F(m), Fn(m);
    Eigen::MatrixXd J(m, m);
    residual_vec(t, F, &J);
    for (int it = 0; it < opt.max_iterations && F.lpNorm<Eigen::Infinity>() > 1e-15; ++it) {
      Eigen::VectorXd step = J.colPivHouseholderQr().solve(-F);
      if (!step.allFinite()) break;
      double lam = 1.0, f0 = F.norm();
      std::vector<double> tn(m);
      bool moved = false;
      for (int ls = 0; ls < 30; ++ls) {
        for (int i = 0; i < m; ++i) tn[i] = t[i] + lam * step(i);
        residual_vec(tn, Fn, nullptr);
        if (Fn.norm() < f0 || Fn.norm() < 1e-15) {
          moved = true;
          break;
        }
        lam *= 0.5;
      }
      if (!moved) break;
      t = tn;
      residual_vec(t, F, &J);
    }
    auto psi = detail::to_reflection(detail::mirror(t, d));
    double res = detail::verify_residual(P, psi);
    if (res < best) {
      best = res;
      best_psi = psi;
    }
    if (best <= opt.delta) {
      PhaseSequence ps;
      ps.phases = best_psi;
      ps.residual = best;
      ps.restarts = attempt;
      return ps;
    }
  }
  throw SolverError("phase solver did not reach the tolerance", best);
}

// Phases realizing T_q exactly.
inline std::vector<double> chebyshev_phases(int q) {
  return detail::to_reflection(std::vector<double>(q + 1, 0.0));
}

// Gate lists of a one-flag block encoding and its adjoint.
struct OracleGates {
  std::vector<Gate> forward;
  std::vector<Gate> backward;
  int flag = -1;
};

inline OracleGates oracle_gates(const std::vector<Gate>& fwd, int flag) {
  OracleGates o;
  o.forward = fwd;
  for (auto it = fwd.rbegin(); it != fwd.rend(); ++it) o.backward.push_back(inverse(*it));
  o.flag = flag;
  return o;
}

// U_Phi: oracle, phase, oracle^dagger, phase, ... with phases[q-t] after call t.
inline void append_alternating(Builder& b, const OracleGates& o, const std::vector<double>& phases) {
  const int q = static_cast<int>(phases.size());
  for (int t = 1; t <= q; ++t) {
    for (const auto& g : (t % 2 ? o.forward : o.backward)) b.add(g);
    b.rz(o.flag, -2.0 * phases[q - t]);
  }
}

// (H x I)(|0><0| U_Phi + |1><1| U_{-Phi})(H x I) with the sign chosen by `qsvt`.
inline void append_polynomial_oracle(Builder& b, const OracleGates& o, const std::vector<double>& phases,
                                     int qsvt) {
  const int q = static_cast<int>(phases.size());
  b.h(qsvt);
  for (int t = 1; t <= q; ++t) {
    for (const auto& g : (t % 2 ? o.forward : o.backward)) b.add(g);
    b.cx(qsvt, o.flag).rz(o.flag, -2.0 * phases[q - t]).cx(qsvt, o.flag);
  }
  b.h(qsvt);
}

// Layout main n, be_flag, qsvt_flag, work n, copy, pool n-2; block on both
// flags is diag(Re P(xhat_k / sqrt 2)).
inline BlockEncoding polynomial_oracle(const CoordinateGrid& g, const std::vector<double>& phases) {
  const int n = g.n;
  QubitLayout l(n, 1, 1, 0, 0, n + 1 + coordinate_pool_size(n));
  auto w = coordinate_wires(l, n);
  auto ucs = coordinate_ucs(l, w, walsh_coefficients(g));
  Builder ox(l);
  append_diagonal_encoding(ox, w, ucs, M_PI / 4);
  auto o = oracle_gates(std::move(ox).build().gates(), w.lcu);
  Builder b(l);
  auto st = b.begin_stage();
  append_polynomial_oracle(b, o, phases, l.qsvt_flag()[0]);
  b.end_stage("polynomial_oracle", st);
  BlockEncoding be;
  be.circuit = std::move(b).build();
  be.alpha = 1.0;
  be.flags = l.flag_qubits();
  be.data = w.main;
  be.pure = w.pool;
  be.work = w.work;
  be.work.push_back(w.copy);
  be.ucs_calls = 4 * static_cast<int>(phases.size());
  return be;
}

// Plain U_Phi on the one-flag O_x layout (qsvt_flag slot unused).
inline Circuit alternating_sequence(const CoordinateGrid& g, const std::vector<double>& phases) {
  auto ox = amplitude_oracle_x(g);
  auto o = oracle_gates(ox.circuit.gates(), ox.flags[0]);
  Builder b(ox.circuit.layout());
  append_alternating(b, o, phases);
  return std::move(b).build();
}

}  // namespace funcprep
