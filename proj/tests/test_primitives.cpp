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

#include <gtest/gtest.h>

#include <random>

#include "funcprep/primitives.hpp"
#include "funcprep/simulator.hpp"
#include "oracle.hpp"
#include "testutil.hpp"

using namespace funcprep;

namespace {

QubitLayout plain(int w) { return QubitLayout(w, 0, 0, 0, 0, 0); }

// Expected action of "u on data when pattern matches" on basis column `col`
// with ancillas clean.
double compare_controlled(const Circuit& full, const Circuit& u, const ControlPattern& p,
                          const std::vector<int>& anc) {
  auto U = oracle::unitary(u), V = oracle::unitary(full);
  long d = 1L << full.width();
  long amask = 0;
  for (int a : anc) amask |= 1L << a;
  double worst = 0.0;
  for (long col = 0; col < d; ++col) {
    if (col & amask) continue;
    bool on = true;
    for (auto c : p) on = on && (((col >> c.qubit) & 1) == (c.value ? 1 : 0));
    for (long row = 0; row < d; ++row) {
      std::complex<double> want = on ? U(row, col) : std::complex<double>(row == col ? 1.0 : 0.0);
      worst = std::max(worst, std::abs(V(row, col) - want));
    }
  }
  return worst;
}

}  // namespace

TEST(MultiControl, MatchesOracleForEveryPattern) {
  // data qubit 0 (and 1 for CX bodies), controls 2..4, ancillas 5..7
  std::mt19937 rng(31);
  for (int m = 1; m <= 3; ++m) {
    for (int pat = 0; pat < (1 << m); ++pat) {
      ControlPattern p;
      for (int i = 0; i < m; ++i) p.push_back({2 + i, ((pat >> i) & 1) == 1});
      auto u = testutil::random_circuit(plain(8), 6, rng, false, 2);
      auto c = multi_control(u, p, {5, 6, 7});
      EXPECT_LT(compare_controlled(c, u, p, {5, 6, 7}), 1e-12) << m << " " << pat;
    }
  }
}

TEST(MultiControl, WithToffoliBodyUsesExtraAncilla) {
  Builder b(plain(8));
  b.ccx(0, 1, 2);
  auto u = std::move(b).build();
  ControlPattern p{{3, true}, {4, false}};
  auto c = multi_control(u, p, {5, 6});
  EXPECT_LT(compare_controlled(c, u, p, {5, 6}), 1e-12);
  EXPECT_THROW(multi_control(u, p, {5}), LayoutError);
}

TEST(MultiControl, ThreeControlXOnTarget) {
  // pattern 111 on an X target: at most 32 one-qubit ops and 24 CX
  QubitLayout l = plain(7);
  Builder b(l);
  b.x(0);
  auto c = multi_control(std::move(b).build(), all_ones({1, 2, 3}), {4, 5, 6});
  auto k = census(c);
  EXPECT_LE(k.one_qubit_ops, 32);
  EXPECT_LE(k.cnots, 24);
}

TEST(MultiControl, CostBeyondControlledBodyWithinBudget) {
  for (int n = 1; n <= 8; ++n) {
    QubitLayout l = plain(2 * n + 2);
    Builder u(l);
    u.ry(0, 0.7);
    auto body = std::move(u).build();
    std::vector<int> ctrl, pool;
    for (int i = 0; i < n; ++i) ctrl.push_back(1 + i);
    for (int i = 0; i < n; ++i) pool.push_back(1 + n + i);
    auto k = census(multi_control(body, all_ones(ctrl), pool)) - census(controlled(body, 1));
    EXPECT_LE(k.one_qubit_ops, 16 * n - 16) << n;
    EXPECT_LE(k.cnots, 12 * n - 12) << n;
  }
}

TEST(Mcx, BorrowedQubitIsRestored) {
  // 5 controls, 2 clean ancillas, 1 borrowed qubit in an arbitrary state
  QubitLayout l = plain(10);
  for (int init = 0; init < 64; ++init) {
    Builder b(l);
    for (int i = 0; i < 5; ++i)
      if ((init >> i) & 1) b.x(i);
    if ((init >> 5) & 1) b.h(9);
    mcx_ones_borrow(b, {0, 1, 2, 3, 4}, 5, {6, 7}, 9);
    if ((init >> 5) & 1) b.h(9);
    auto s = run(std::move(b).build());
    std::size_t expect = init & 31;
    if ((init & 31) == 31) expect |= 1u << 5;
    EXPECT_NEAR(std::abs(s[expect]), 1.0, 1e-12) << init;
  }
}

TEST(Reflection, IsIdentityMinusTwiceZeroProjector) {
  for (int m = 1; m <= 5; ++m) {
    QubitLayout l = plain(m + std::max(0, m - 3));
    std::vector<int> q, pool;
    for (int i = 0; i < m; ++i) q.push_back(i);
    for (int i = m; i < l.width(); ++i) pool.push_back(i);
    auto V = oracle::unitary(reflection_zero(l, q, pool));
    long amask = 0;
    for (int a : pool) amask |= 1L << a;
    for (long col = 0; col < (1L << l.width()); ++col) {
      if (col & amask) continue;
      for (long row = 0; row < (1L << l.width()); ++row) {
        double want = row == col ? (col == 0 ? -1.0 : 1.0) : 0.0;
        EXPECT_LT(std::abs(V(row, col) - want), 1e-12);
      }
    }
  }
}

TEST(OrGate, TruthTable) {
  for (int in = 0; in < 4; ++in) {
    Builder b(plain(3));
    if (in & 1) b.x(0);
    if (in & 2) b.x(1);
    or_gate(b, 0, 1, 2);
    auto s = run(std::move(b).build());
    std::size_t expect = in | (in ? 4 : 0);
    EXPECT_NEAR(std::abs(s[expect]), 1.0, 1e-12);
  }
}

TEST(MuxRotation, MatchesPerBranchRotation) {
  std::mt19937 rng(32);
  std::uniform_real_distribution<double> ang(-3, 3);
  for (auto kind : {GateKind::RY, GateKind::RZ}) {
    for (int k = 0; k <= 3; ++k) {
      std::vector<double> a(1u << k);
      for (auto& x : a) x = ang(rng);
      std::vector<int> ctrl;
      for (int i = 0; i < k; ++i) ctrl.push_back(i + 1);
      Builder b(plain(k + 1));
      mux_rotation(b, kind, ctrl, 0, a);
      auto c = std::move(b).build();
      EXPECT_EQ(census(c).cnots, k ? (1 << k) : 0);
      auto V = oracle::unitary(c);
      for (long j = 0; j < (1L << k); ++j) {
        Gate g{kind, 0, -1, -1, a[j]};
        auto r = oracle::one_qubit(g);
        for (int x = 0; x < 2; ++x)
          for (int y = 0; y < 2; ++y) EXPECT_LT(std::abs(V((j << 1) | x, (j << 1) | y) - r(x, y)), 1e-12);
      }
    }
  }
}

TEST(ControlledRotation, BothPolarities) {
  for (bool v : {true, false}) {
    Builder b(plain(2));
    controlled_rotation(b, GateKind::RY, 1, v, 0, 1.1);
    auto V = oracle::unitary(std::move(b).build());
    auto r = oracle::one_qubit(Gate{GateKind::RY, 0, -1, -1, 1.1});
    int on = v ? 1 : 0;
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) {
        EXPECT_LT(std::abs(V((on << 1) | x, (on << 1) | y) - r(x, y)), 1e-12);
        EXPECT_LT(std::abs(V(((1 - on) << 1) | x, ((1 - on) << 1) | y) - (x == y ? 1.0 : 0.0)), 1e-12);
      }
  }
}
