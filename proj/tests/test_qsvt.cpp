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

#include "funcprep/qsvt.hpp"
#include "funcprep/simulator.hpp"
#include "oracle.hpp"

using namespace funcprep;

namespace {

// Reference product built from explicit 2x2 matrices.
std::complex<double> reference_product(const std::vector<double>& phi, double x) {
  Eigen::Matrix2cd R, acc = Eigen::Matrix2cd::Identity();
  double s = std::sqrt(1 - x * x);
  R << x, s, s, -x;
  for (double p : phi) {
    Eigen::Matrix2cd D = Eigen::Matrix2cd::Zero();
    D(0, 0) = std::exp(std::complex<double>(0, p));
    D(1, 1) = std::exp(std::complex<double>(0, -p));
    acc = acc * D * R;
  }
  return acc(0, 0);
}

// Random parity polynomial in the Chebyshev basis scaled to sup `target`.
ParityPolynomial random_poly(int q, double target, std::mt19937& rng) {
  std::normal_distribution<double> nd;
  std::vector<double> c(q + 1, 0.0);
  for (int j = q % 2; j <= q; j += 2) c[j] = nd(rng);
  if (c[q] == 0.0) c[q] = 1.0;
  double sup = cheb::sup_norm(c, 20000);
  for (auto& v : c) v *= target / sup;
  return ParityPolynomial::make(c);
}

}  // namespace

TEST(Realized, MatchesReferenceProduct) {
  std::mt19937 rng(51);
  std::uniform_real_distribution<double> u(-3, 3), xu(-1, 1);
  for (int q = 1; q <= 12; ++q) {
    std::vector<double> phi(q);
    for (auto& p : phi) p = u(rng);
    for (int k = 0; k < 5; ++k) {
      double x = xu(rng);
      EXPECT_LT(std::abs(realized_polynomial(phi, x) - reference_product(phi, x)), 1e-13);
    }
  }
}

TEST(Realized, ChebyshevPhasesGiveChebyshevPolynomials) {
  EXPECT_NEAR(realized_polynomial(chebyshev_phases(3), 0.5).real(), -1.0, 1e-14);
  for (int q = 1; q <= 30; ++q)
    for (double x : {-0.9, -0.3, 0.2, 0.77}) {
      auto v = realized_polynomial(chebyshev_phases(q), x);
      EXPECT_NEAR(v.real(), std::cos(q * std::acos(x)), 1e-12);
      EXPECT_NEAR(v.imag(), 0.0, 1e-12);
    }
}

TEST(ParityPolynomial, Validation) {
  EXPECT_THROW(ParityPolynomial::make({0.1, 0.2, 0.3}), DomainError);
  EXPECT_THROW(ParityPolynomial::make({0.0, 1.5}), DomainError);
  EXPECT_THROW(ParityPolynomial::make(std::vector<double>(202, 0.001)), DomainError);
  auto p = ParityPolynomial::make({0.0, 0.5, 0.0, 0.25});
  EXPECT_EQ(p.degree(), 3);
  EXPECT_EQ(p.parity(), 1);
  EXPECT_TRUE(p.strictly_bounded());
  EXPECT_EQ(p.padded(7).degree(), 7);
  EXPECT_THROW(p.padded(6), DomainError);
}

TEST(FindPhases, ChebyshevInputsToMachinePrecision) {
  for (int q = 1; q <= 40; ++q) {
    std::vector<double> c(q + 1, 0.0);
    c[q] = 1.0;
    auto ps = find_phases(ParityPolynomial::make(c));
    EXPECT_LE(ps.residual, 1e-12) << q;
  }
}

TEST(FindPhases, RandomParityPolynomials) {
  std::mt19937 rng(52);
  std::uniform_int_distribution<int> qd(1, 40);
  for (int trial = 0; trial < 30; ++trial) {
    auto P = random_poly(qd(rng), 0.99, rng);
    auto ps = find_phases(P);
    EXPECT_LE(ps.residual, 1e-8);
    // independent check on a fresh grid
    for (int j = 0; j <= 200; ++j) {
      double x = -1 + j / 100.0;
      EXPECT_NEAR(reference_product(ps.phases, x).real(), P(x), 1e-8);
    }
  }
}

TEST(FindPhases, DeterministicForFixedSeed) {
  std::mt19937 rng(53);
  auto P = random_poly(17, 0.95, rng);
  auto a = find_phases(P), b = find_phases(P);
  EXPECT_EQ(a.phases, b.phases);
}

TEST(FindPhases, RejectsConstant) {
  EXPECT_THROW(find_phases(ParityPolynomial::make({0.3})), DomainError);
}

TEST(AlternatingSequence, BlockIsComplexPolynomial) {
  std::mt19937 rng(54);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int n : {2, 3}) {
    auto g = make_grid(n, -0.55, 0.8);
    for (int q : {1, 2, 5}) {
      std::vector<double> phi(q);
      for (auto& p : phi) p = u(rng);
      auto c = alternating_sequence(g, phi);
      auto m = extract_block(c, c.layout().main().qubits());
      const int d = 1 << n;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          auto want = i == j ? realized_polynomial(phi, g.xhat[i] / std::sqrt(2.0)) : 0.0;
          EXPECT_LT(std::abs(m[i * d + j] - want), 1e-11);
        }
    }
  }
}

TEST(PolynomialOracle, BlockIsRealPart) {
  std::mt19937 rng(55);
  for (int n : {2, 3}) {
    auto g = make_grid(n, -0.25, 0.95);
    for (int q : {1, 2, 3, 6}) {
      auto P = random_poly(q, 0.9, rng);
      auto ps = find_phases(P);
      auto be = polynomial_oracle(g, ps.phases);
      auto m = extract_block(be.circuit, be.data);
      const int d = 1 << n;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          EXPECT_LT(std::abs(m[i * d + j] - (i == j ? P(g.xhat[i] / std::sqrt(2.0)) : 0.0)), 1e-10);
    }
  }
}

TEST(PolynomialOracle, IdentityPolynomialReproducesCoordinates) {
  auto g = make_grid(3, -0.6, 0.4);
  auto be = polynomial_oracle(g, chebyshev_phases(1));
  auto m = extract_block(be.circuit, be.data);
  for (int i = 0; i < 8; ++i) EXPECT_NEAR(m[i * 8 + i].real(), g.xhat[i] / std::sqrt(2.0), 1e-12);
}

TEST(PolynomialOracle, CensusWithinBudget) {
  for (int n = 2; n <= 8; ++n) {
    auto g = make_grid(n, -0.5, 0.9);
    for (int q = 1; q <= 9; q += 2) {
      auto k = census(polynomial_oracle(g, std::vector<double>(q, 0.3)).circuit);
      EXPECT_LE(k.one_qubit_ops, 2304LL * q * n * n - 1064LL * q * n - 108LL * q);
      EXPECT_LE(k.cnots, 1864LL * q * n * n - 860LL * q * n - 92LL * q);
    }
  }
}
