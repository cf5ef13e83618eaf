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

#include "funcprep/piecewise.hpp"
#include "funcprep/simulator.hpp"

using namespace funcprep;
using cd = std::complex<double>;

namespace {

FunctionSpec mono(std::vector<cd> c) {
  FunctionSpec f;
  f.coeffs = std::move(c);
  return f;
}

// Classical evaluation of the piecewise target with its own boundary scan.
std::vector<cd> brute(const std::vector<std::vector<cd>>& pieces, const std::vector<double>& K,
                      const CoordinateGrid& g) {
  const double a = g.a - g.shift;
  std::vector<cd> v;
  for (std::size_t k = 0; k < g.points(); ++k) {
    std::size_t p = 0;
    for (double bk : K)
      if (static_cast<double>(k) >= (bk - a) / g.dx - 1e-9) ++p;
    cd acc = 0.0;
    for (std::size_t j = 0; j < pieces[p].size(); ++j) acc += pieces[p][j] * std::pow(g.x[k], static_cast<double>(j));
    v.push_back(acc);
  }
  return v;
}

PiecewiseSpec make_spec(const std::vector<std::vector<cd>>& pieces, const std::vector<double>& K) {
  PiecewiseSpec p;
  for (const auto& c : pieces) p.pieces.push_back(mono(c));
  p.breakpoints = K;
  return p;
}

}  // namespace

TEST(Comparator, ExhaustiveTruthTable) {
  for (int n = 1; n <= 6; ++n) {
    const std::uint64_t N = std::uint64_t{1} << n;
    for (std::uint64_t kn = 0; kn < N; ++kn) {
      auto c = comparator(kn, n);
      const int ind = c.layout().indicator()[0];
      for (std::uint64_t k = 0; k < N; ++k) {
        StateVector s = StateVector::basis(c.width(), k);
        run_into(s, c);
        std::size_t expect = k | (k >= kn ? std::size_t{1} << ind : 0);
        ASSERT_NEAR(std::abs(s[expect]), 1.0, 1e-12) << n << " " << kn << " " << k;
      }
    }
  }
}

TEST(Comparator, CensusAndAncillas) {
  for (int n = 2; n <= 20; ++n) {
    const std::uint64_t N = std::uint64_t{1} << n;
    const std::uint64_t stride = n <= 12 ? 1 : (N / 4096) | 1;
    std::vector<std::uint64_t> kns;
    for (std::uint64_t kn = 0; kn < N; kn += stride) kns.push_back(kn);
    // alternating bit patterns maximize the gate count
    for (std::uint64_t pat : {0x55555ull, 0xAAAAAull, 0x33333ull, 0xCCCCCull}) kns.push_back(pat & (N - 1));
    for (std::uint64_t kn : kns) {
      auto c = comparator(kn, n);
      auto k = census(c);
      EXPECT_LE(k.one_qubit_ops, 16 * n + 34) << n << " " << kn;
      EXPECT_LE(k.cnots, 12 * n - 4) << n << " " << kn;
      EXPECT_LE(c.layout().pure_ancillas().size, std::max(n - 2, 0));
    }
  }
  EXPECT_EQ(comparator(0, 4).size(), 1u);
  EXPECT_EQ(comparator(0, 4).gates()[0].kind, GateKind::X);
}

TEST(Indicator, ThermometerExhaustive) {
  std::vector<std::uint64_t> kn = {3, 9};
  auto c = interval_indicator(kn, 4);
  auto ind = c.layout().indicator().qubits();
  for (std::uint64_t k = 0; k < 16; ++k) {
    StateVector s = StateVector::basis(c.width(), k);
    run_into(s, c);
    std::size_t idx = k;
    int ones = 0;
    for (std::size_t g = 0; g < kn.size(); ++g)
      if (k >= kn[g]) {
        idx |= std::size_t{1} << ind[g];
        ++ones;
      }
    ASSERT_NEAR(std::abs(s[idx]), 1.0, 1e-12);
    // pattern is 1^g 0^(G-1-g)
    for (int g = 0; g < ones; ++g) EXPECT_TRUE(k >= kn[g]);
  }
}

TEST(Piecewise, BoundaryIndexRule) {
  auto g = make_grid(3, -0.7, 0.7);
  const double a = g.a - g.shift;
  PiecewiseSpec p = make_spec({{1.0}, {2.0}}, {a + 3 * g.dx});
  EXPECT_EQ(breakpoint_indices(p, g)[0], 3u);
  p.breakpoints = {a + 3.5 * g.dx};
  EXPECT_EQ(breakpoint_indices(p, g)[0], 4u);
  p.breakpoints = {0.9};
  EXPECT_THROW(breakpoint_indices(p, g), DomainError);
  auto bad = make_spec({{1.0}, {2.0}, {3.0}}, {0.2, 0.1});
  EXPECT_THROW(breakpoint_indices(bad, g), DomainError);
}

TEST(Piecewise, SinglePieceMatchesAssembleUf) {
  auto g = make_grid(3, -0.6, 0.8);
  std::vector<cd> c = {0.2, cd(0.4, 0.1), -0.3};
  auto a = assemble_piecewise(make_spec({c}, {}), g);
  auto b = assemble_uf(mono(c), g);
  auto sa = run(a.circuit), sb = run(b.circuit);
  EXPECT_GE(fidelity(restrict_to(sa, a.main), restrict_to(sb, b.main)), 1 - 1e-12);
}

TEST(Piecewise, LeakyRelu) {
  auto g = make_grid(5, -0.8, 0.8);
  std::vector<std::vector<cd>> pieces = {{0.0, 0.1}, {0.0, 1.0}};
  auto spec = make_spec(pieces, {0.0});
  AssemblyOptions opt;
  opt.solver.delta = 1e-10;
  auto u = assemble_piecewise(spec, g, opt);
  auto o = simulate_uf(u, brute(pieces, {0.0}, g));
  EXPECT_GE(o.fidelity, 1 - 1e-8);
  EXPECT_LE(o.pure_leakage, 1e-12);
  EXPECT_EQ(u.indicator.size(), 1u);
}

TEST(Piecewise, ThreeMixedDegrees) {
  auto g = make_grid(4, -0.75, 0.65);
  std::vector<std::vector<cd>> pieces = {{0.3, 0.0, -0.5}, {0.1, 0.4, cd(0, 0.2), 0.3, -0.2}, {-0.2, 0.6}};
  std::vector<double> K = {-0.3, 0.25};
  AssemblyOptions opt;
  opt.solver.delta = 1e-10;
  auto u = assemble_piecewise(make_spec(pieces, K), g, opt);
  auto o = simulate_uf(u, brute(pieces, K, g));
  EXPECT_GE(o.fidelity, 1 - 1e-8);
  EXPECT_LE(o.pure_leakage, 1e-12);
  EXPECT_LE(static_cast<int>(u.pure.size() + u.work.size()), 2 * g.n - 1);
}

TEST(Piecewise, PieceIndependence) {
  auto g = make_grid(4, -0.7, 0.7);
  std::vector<double> K = {0.1};
  std::vector<std::vector<cd>> p1 = {{0.5, 0.2}, {0.1, -0.3, 0.4}};
  std::vector<std::vector<cd>> p2 = {{0.5, 0.2}, {-0.4, 0.0, 0.1, 0.3}};
  auto s1 = simulate_uf(assemble_piecewise(make_spec(p1, K), g), {}).post_state;
  auto s2 = simulate_uf(assemble_piecewise(make_spec(p2, K), g), {}).post_state;
  auto kn = breakpoint_indices(make_spec(p1, K), g);
  std::vector<cd> a, b;
  for (std::uint64_t k = 0; k < kn[0]; ++k) {
    a.push_back(s1[k]);
    b.push_back(s2[k]);
  }
  auto normalize = [](std::vector<cd>& v) {
    double n = 0;
    for (auto& z : v) n += std::norm(z);
    for (auto& z : v) z /= std::sqrt(n);
  };
  normalize(a);
  normalize(b);
  // equal up to a global phase
  cd ov = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) ov += std::conj(a[k]) * b[k];
  ov /= std::abs(ov);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_LT(std::abs(a[k] * ov - b[k]), 1e-10);
}

TEST(Piecewise, ReluWithEmptyPiece) {
  auto g = make_grid(4, -0.6, 0.9);
  std::vector<std::vector<cd>> pieces = {{0.0}, {0.0, 1.0}};
  AssemblyOptions opt;
  opt.solver.delta = 1e-10;
  auto u = assemble_piecewise(make_spec(pieces, {0.0}), g, opt);
  auto o = simulate_uf(u, brute(pieces, {0.0}, g));
  EXPECT_GE(o.fidelity, 1 - 1e-8);
  EXPECT_LE(o.pure_leakage, 1e-12);
  EXPECT_THROW(assemble_piecewise(make_spec({{0.0}, {0.0}}, {0.0}), g), DomainError);
}
