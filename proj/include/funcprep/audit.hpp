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
#include <string>
#include <vector>

#include "funcprep/bounds.hpp"
#include "funcprep/coordinate.hpp"
#include "funcprep/lcu.hpp"
#include "funcprep/piecewise.hpp"
#include "funcprep/primitives.hpp"
#include "funcprep/qsvt.hpp"

namespace funcprep {

// One count-only measurement against its closed-form ceiling.
struct AuditRow {
  std::string component;
  int n = 0;
  int q = 0;
  GateCensus measured;
  CensusBound bound;
  double limit = 1.0;  // allowed ratio

  double ratio() const { return bound.ratio(measured); }
  bool pass() const { return ratio() <= limit; }
};

namespace audit {

inline CoordinateGrid default_grid(int n) { return make_grid(n, -0.6, 0.9); }

// Cost of C^n(RY) beyond one singly controlled RY.
inline AuditRow multi_control(int n) {
  QubitLayout l(2 * n + 2, 0, 0, 0, 0, 0);
  Builder u(l);
  u.ry(0, 0.7);
  const Circuit body = std::move(u).build();
  std::vector<int> ctrl, pool;
  for (int i = 0; i < n; ++i) ctrl.push_back(1 + i);
  for (int i = 0; i < n; ++i) pool.push_back(1 + n + i);
  AuditRow r{"multi_control", n, 0, census(funcprep::multi_control(body, all_ones(ctrl), pool)) - census(controlled(body, 1)),
             bounds::multi_control(n)};
  return r;
}

inline AuditRow binary_norm_prep(int n) {
  QubitLayout l(n, 0, 0, 0, 0, std::max(n - 2, 0));
  Builder b(l);
  binary_norm_state_prep(b, l.main().qubits(), walsh_coefficients(default_grid(n)), l.pure_ancillas().qubits());
  return {"binary_norm_prep", n, 0, census(b.snapshot()), bounds::binary_norm_prep(n)};
}

inline AuditRow amplitude_oracle(int n) {
  return {"amplitude_oracle_x", n, 0, census(amplitude_oracle_x(default_grid(n)).circuit), bounds::amplitude_oracle_x(n)};
}

inline AuditRow polynomial_oracle(int q, int n) {
  return {"polynomial_oracle", n, q, census(funcprep::polynomial_oracle(default_grid(n), chebyshev_phases(q)).circuit),
          bounds::polynomial_oracle(q, n)};
}

// Worst threshold: alternating bits maximize the ripple cost.
inline AuditRow comparator(int n) {
  const std::uint64_t N = std::uint64_t{1} << n;
  GateCensus worst;
  auto take = [&](std::uint64_t kn) {
    auto k = census(funcprep::comparator(kn, n));
    if (k.one_qubit_ops + k.cnots > worst.one_qubit_ops + worst.cnots) worst = k;
  };
  if (n <= 12)
    for (std::uint64_t kn = 0; kn < N; ++kn) take(kn);
  for (std::uint64_t p : {0x55555ull, 0xAAAAAull, 0x33333ull, 0xCCCCCull}) take(p & (N - 1));
  return {"comparator", n, 0, worst, bounds::comparator(n)};
}

// Complex mixed-parity test function of degree Q (all four branches present).
inline FunctionSpec audit_function(int Q) {
  FunctionSpec f;
  f.name = "audit";
  for (int j = 0; j <= Q; ++j) f.coeffs.emplace_back(1.0 / (j + 1), 0.3 / (j + 2));
  return f;
}

inline AuditRow state_preparation(int Q, int n, OracleMode mode) {
  AssemblyOptions opt;
  opt.mode = mode;
  auto u = assemble_uf(audit_function(Q), default_grid(n), opt);
  AuditRow r{mode == OracleMode::Sharing ? "state_preparation" : "state_preparation_fallback", n, Q,
             census(u.circuit), bounds::state_preparation(Q, n)};
  r.limit = mode == OracleMode::Sharing ? 1.0 : 4.0;
  return r;
}

}  // namespace audit

// Least-squares fit quality of y against the given basis functions.
inline double r_squared(const std::vector<std::vector<double>>& X, const std::vector<double>& y) {
  const Eigen::Index m = static_cast<Eigen::Index>(y.size()), p = X.empty() ? 0 : static_cast<Eigen::Index>(X[0].size());
  Eigen::MatrixXd A(m, p);
  Eigen::VectorXd b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index c = 0; c < p; ++c) A(i, c) = X[i][c];
    b(i) = y[i];
  }
  const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(b);
  const double ss_res = (A * coef - b).squaredNorm();
  const double ss_tot = (b.array() - b.mean()).matrix().squaredNorm();
  return ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
}

}  // namespace funcprep
