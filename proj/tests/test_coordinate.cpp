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

#include "funcprep/coordinate.hpp"
#include "funcprep/simulator.hpp"
#include "testutil.hpp"

using namespace funcprep;

namespace {

// Full Walsh-Hadamard transform by the defining sum.
std::vector<double> brute_walsh(const std::vector<double>& v, int n) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) acc += (__builtin_popcountll(i & k) & 1) ? -v[k] : v[k];
    out[i] = acc * std::pow(2.0, -0.5 * n);
  }
  return out;
}

QubitLayout prep_layout(int n) { return QubitLayout(n, 0, 0, 0, 1, std::max(n - 2, 0)); }

std::vector<int> range(int first, int count) {
  std::vector<int> v;
  for (int i = 0; i < count; ++i) v.push_back(first + i);
  return v;
}

}  // namespace

TEST(Grid, ValidatesAndNormalizes) {
  EXPECT_THROW(make_grid(3, -1.0, 0.5), DomainError);
  EXPECT_THROW(make_grid(3, 0.5, 0.5), DomainError);
  EXPECT_THROW(make_grid(0, -0.5, 0.5), DomainError);
  auto g = make_grid(3, -0.3, 0.7);
  EXPECT_NEAR(g.dx, 1.0 / 7.0, 1e-15);
  double ss = 0;
  for (double v : g.xhat) ss += v * v;
  EXPECT_NEAR(ss, 1.0, 1e-14);
  EXPECT_EQ(g.shift, 0.0);
}

TEST(Grid, SymmetricIntervalIsNudged) {
  auto g = make_grid(4, -0.5, 0.5);
  EXPECT_GT(g.shift, 0.0);
  auto p = walsh_coefficients(g);
  EXPECT_NE(p.beta[0], 0.0);
  EXPECT_NO_THROW(binary_norm_angles(p));
}

TEST(Walsh, SupportedOnBinaryNormAtMostOne) {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> u(-0.95, 0.95);
  for (int n = 1; n <= 8; ++n) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    auto g = make_grid(n, a, b);
    auto full = brute_walsh(g.xhat, n);
    auto p = walsh_coefficients(g);
    for (std::size_t i = 0; i < full.size(); ++i) {
      int w = __builtin_popcountll(i);
      if (w == 0) {
        EXPECT_NEAR(full[i], p.beta[0], 1e-13);
      } else if (w == 1) {
        EXPECT_NEAR(full[i], p.beta[__builtin_ctzll(i) + 1], 1e-13);
      } else {
        EXPECT_NEAR(full[i], 0.0, 1e-13);
      }
    }
  }
}

TEST(BinaryNormPrep, PreparesProfileWithCleanPool) {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(-0.95, 0.95);
  for (int n = 1; n <= 9; ++n) {
    for (int trial = 0; trial < 4; ++trial) {
      double a = u(rng), b = u(rng);
      if (a > b) std::swap(a, b);
      auto g = make_grid(n, a, b);
      auto p = walsh_coefficients(g);
      auto l = prep_layout(n);
      Builder bl(l);
      binary_norm_state_prep(bl, range(0, n), p, range(n + 1, std::max(n - 2, 0)));
      auto s = run(std::move(bl).build());
      auto want = brute_walsh(g.xhat, n);
      for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(s[i].real(), want[i], 1e-12);
      EXPECT_NEAR(s.norm2(), 1.0, 1e-12);
      EXPECT_LT(verify_pure_ancillas(s, range(n, 1 + std::max(n - 2, 0))), 1e-24);
    }
  }
}

TEST(BinaryNormPrep, ControlledFormFiresOnlyOnItsValue) {
  auto g = make_grid(5, -0.8, 0.4);  // beta_0 < 0 exercises the sign fix
  auto p = walsh_coefficients(g);
  ASSERT_LT(p.beta[0], 0.0);
  for (int n : {2, 3, 5}) {
    auto gg = make_grid(n, -0.8, 0.4);
    auto pp = walsh_coefficients(gg);
    auto want = brute_walsh(gg.xhat, n);
    for (bool value : {true, false}) {
      for (int cin = 0; cin < 2; ++cin) {
        auto l = prep_layout(n);
        Builder bl(l);
        if (cin) bl.x(n);
        binary_norm_state_prep(bl, range(0, n), pp, range(n + 1, std::max(n - 2, 0)), ControlSpec{n, value});
        auto s = run(std::move(bl).build());
        std::size_t cbit = cin ? (std::size_t{1} << n) : 0;
        bool fire = (cin == 1) == value;
        for (std::size_t i = 0; i < want.size(); ++i) {
          double expect = fire ? want[i] : (i == 0 ? 1.0 : 0.0);
          EXPECT_NEAR(s[i | cbit].real(), expect, 1e-12);
        }
      }
    }
  }
}

TEST(BinaryNormPrep, CensusWithinBudget) {
  for (int n = 2; n <= 10; ++n) {
    auto g = make_grid(n, -0.6, 0.9);
    Builder bl(prep_layout(n));
    binary_norm_state_prep(bl, range(0, n), walsh_coefficients(g), range(n + 1, std::max(n - 2, 0)));
    auto k = census(bl.snapshot());
    EXPECT_LE(k.one_qubit_ops, 8 * n * n - 22 * n + 15) << n;
    EXPECT_LE(k.cnots, 6 * n * n - 6 * n + 10) << n;
    if (n == 4) {
      EXPECT_LE(k.one_qubit_ops, 55);
      EXPECT_LE(k.cnots, 82);
    }
  }
}

TEST(CoordinateSuperposition, PreparesNormalizedGrid) {
  for (int n = 1; n <= 8; ++n) {
    auto g = make_grid(n, -0.45, 0.8);
    Builder bl(prep_layout(n));
    coordinate_superposition(bl, range(0, n), walsh_coefficients(g), range(n + 1, std::max(n - 2, 0)));
    auto s = run(std::move(bl).build());
    for (std::size_t k = 0; k < g.points(); ++k) EXPECT_NEAR(s[k].real(), g.xhat[k], 1e-12);
  }
}

TEST(DiagonalEncoding, EigenvaluesAreRealAndImaginaryParts) {
  // h = 3, random complex preparation states
  std::mt19937 rng(43);
  const int h = 3;
  QubitLayout l(h, 1, 0, 0, 0, h + 1 + 1);
  EncodingWires w;
  w.main = range(0, h);
  w.lcu = h;
  w.work = range(h + 1, h);
  w.copy = 2 * h + 1;
  w.pool = {2 * h + 2};
  for (int trial = 0; trial < 20; ++trial) {
    QubitLayout sl(h, 0, 0, 0, 0, 0);
    auto us_local = testutil::random_circuit(sl, 30, rng, false);
    auto psi = run(us_local);
    std::vector<Gate> moved;
    for (auto g : us_local.gates()) {
      g.target = w.work[g.target];
      if (g.c0 >= 0) g.c0 = w.work[g.c0];
      moved.push_back(g);
    }
    auto ucs = generic_ucs(Circuit(l, moved), w);
    for (int p = 0; p < 2; ++p) {
      Builder bl(l);
      append_diagonal_encoding(bl, w, ucs, M_PI / 2, p);
      auto c = std::move(bl).build();
      for (int k = 0; k < (1 << h); ++k) {
        StateVector s = StateVector::basis(l.width(), embed(w.main, k));
        run_into(s, c);
        double lambda = p == 0 ? psi[k].real() : psi[k].imag();
        std::size_t idx = embed(w.main, k);
        EXPECT_NEAR(s[idx].real(), lambda, 1e-10);
        EXPECT_NEAR(s[idx].imag(), 0.0, 1e-10);
        // nothing else survives in the lcu-zero sector
        double rest = 0.0;
        for (std::size_t i = 0; i < s.dim(); ++i)
          if (!((i >> w.lcu) & 1) && i != idx) rest += std::norm(s[i]);
        EXPECT_LT(rest, 1e-20);
      }
    }
  }
}

TEST(DiagonalEncoding, HadamardPairGivesScaledIdentity) {
  QubitLayout sl(2, 0, 0, 0, 0, 0);
  Builder b(sl);
  b.h(0).h(1);
  auto us = std::move(b).build();
  for (auto mode : {EncodingMode::RealOnly, EncodingMode::Complex}) {
    auto be = diagonal_block_encoding(us, 2, mode);
    auto m = extract_block(be.circuit, be.data);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) EXPECT_NEAR(std::abs(m[i * 4 + j] - (i == j ? 0.5 / be.alpha : 0.0)), 0.0, 1e-12);
  }
}

TEST(DiagonalEncoding, ComplexModeEncodesPsiOverTwo) {
  std::mt19937 rng(44);
  for (int h = 2; h <= 3; ++h) {
    QubitLayout sl(h, 0, 0, 0, 0, 0);
    auto us = testutil::random_circuit(sl, 25, rng, false);
    auto psi = run(us);
    auto be = diagonal_block_encoding(us, h, EncodingMode::Complex);
    EXPECT_EQ(be.alpha, 2.0);
    auto m = extract_block(be.circuit, be.data);
    auto re = diagonal_block_encoding(us, h, EncodingMode::RealOnly);
    auto mr = extract_block(re.circuit, re.data);
    const int d = 1 << h;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        EXPECT_LT(std::abs(m[i * d + j] - (i == j ? psi[i] / 2.0 : 0.0)), 1e-12);
        EXPECT_LT(std::abs(mr[i * d + j] - (i == j ? psi[i].real() / std::sqrt(2.0) : 0.0)), 1e-12);
      }
  }
}

TEST(DiagonalEncoding, AuxiliaryCostWithinBudget) {
  std::mt19937 rng(45);
  for (int h = 2; h <= 6; ++h) {
    QubitLayout sl(h, 0, 0, 0, 0, 0);
    auto us = testutil::random_circuit(sl, 10, rng, false);
    auto be = diagonal_block_encoding(us, h, EncodingMode::Complex);
    // cost of one U_C^S call on the same layout
    QubitLayout l = be.circuit.layout();
    EncodingWires w = coordinate_wires(l, h);
    std::vector<Gate> moved;
    for (auto g : us.gates()) {
      g.target = w.work[g.target];
      if (g.c0 >= 0) g.c0 = w.work[g.c0];
      moved.push_back(g);
    }
    auto one = census(Circuit(l, generic_ucs(Circuit(l, moved), w)));
    auto extra = census(be.circuit) - one.scaled(be.ucs_calls);
    EXPECT_LE(be.ucs_calls, 6);
    EXPECT_LE(extra.one_qubit_ops, 528 * h - 463) << h;
    EXPECT_LE(extra.cnots, 428 * h - 378) << h;
    EXPECT_LE(static_cast<int>(be.pure.size() + be.work.size()), 2 * h - 1 + (h < 2 ? 1 : 0));
  }
}

TEST(AmplitudeOracle, BlockIsScaledCoordinateDiagonal) {
  for (int n = 1; n <= 4; ++n) {
    auto g = make_grid(n, -0.35, 0.85);
    auto ox = amplitude_oracle_x(g);
    EXPECT_NEAR(ox.alpha, std::sqrt(2.0), 1e-15);
    auto m = extract_block(ox.circuit, ox.data);
    const int d = 1 << n;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        EXPECT_LT(std::abs(m[i * d + j] - (i == j ? g.xhat[i] / std::sqrt(2.0) : 0.0)), 1e-12);
    EXPECT_LE(static_cast<int>(ox.pure.size() + ox.work.size()), std::max(2 * n - 1, n + 1));
  }
}

TEST(AmplitudeOracle, AncillaHygiene) {
  for (int n = 2; n <= 5; ++n) {
    auto g = make_grid(n, -0.7, 0.2);
    auto ox = amplitude_oracle_x(g);
    // uniform superposition on main as input
    Builder b(ox.circuit.layout());
    for (int q : ox.data) b.h(q);
    b.append(ox.circuit);
    auto s = run(std::move(b).build());
    EXPECT_LT(verify_pure_ancillas(s, ox.pure), 1e-24);
    EXPECT_LT(sector_leakage(s, ox.work, ox.flags), 1e-24);
  }
}

TEST(AmplitudeOracle, ControlledFormMatchesPlainOracle) {
  for (int n : {2, 3, 4}) {
    auto g = make_grid(n, -0.6, 0.75);
    // main n, lcu, ctrl in qsvt slot, work n, copy, pool n-2
    QubitLayout l(n, 1, 1, 0, 0, n + 1 + coordinate_pool_size(n));
    auto w = coordinate_wires(l, n);
    w.borrow = w.main[0];
    const int ctrl = l.qsvt_flag()[0];
    auto ucs = coordinate_ucs(l, w, walsh_coefficients(g));
    Builder plain(l);
    append_diagonal_encoding(plain, w, ucs, M_PI / 4);
    auto P = std::move(plain).build();
    for (bool value : {true, false}) {
      Builder cb(l);
      append_diagonal_encoding(cb, w, ucs, M_PI / 4, 0, ControlSpec{ctrl, value});
      auto C = std::move(cb).build();
      for (int cin = 0; cin < 2; ++cin) {
        Builder prep(l);
        for (int q : w.main) prep.ry(q, 0.3 + q);
        prep.ry(w.lcu, 0.9);
        if (cin) prep.x(ctrl);
        auto init = std::move(prep).build();
        auto got = run(compose(init, C));
        auto ref = run(init);
        if ((cin == 1) == value) run_into(ref, P);
        for (std::size_t i = 0; i < got.dim(); ++i) EXPECT_LT(std::abs(got[i] - ref[i]), 1e-12);
      }
    }
  }
}

TEST(AmplitudeOracle, CensusWithinBudget) {
  for (int n = 2; n <= 10; ++n) {
    auto k = census(amplitude_oracle_x(make_grid(n, -0.5, 0.9)).circuit);
    EXPECT_LE(k.one_qubit_ops, 2304LL * n * n - 1064LL * n - 109) << n;
    EXPECT_LE(k.cnots, 1864LL * n * n - 860LL * n - 92) << n;
  }
}
