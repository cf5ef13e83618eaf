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

#include <algorithm>
#include <cmath>
#include <vector>

namespace funcprep::cheb {

// sum_j c[j] T_j(x) by Clenshaw.
inline double eval(const std::vector<double>& c, double x) {
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t j = c.size(); j-- > 1;) {
    double t = 2.0 * x * b1 - b2 + c[j];
    b2 = b1;
    b1 = t;
  }
  return (c.empty() ? 0.0 : c[0]) + x * b1 - b2;
}

inline double eval_monomial(const std::vector<double>& m, double x) {
  double acc = 0.0;
  for (std::size_t j = m.size(); j-- > 0;) acc = acc * x + m[j];
  return acc;
}

// Chebyshev points of the first kind, cos((2j+1) pi / (2N)).
inline std::vector<double> nodes(std::size_t N) {
  std::vector<double> x(N);
  for (std::size_t j = 0; j < N; ++j) x[j] = std::cos((2.0 * j + 1.0) * M_PI / (2.0 * N));
  return x;
}

// Degree-d interpolant of f through d+1 first-kind nodes.
template <class F>
std::vector<double> interpolate(F&& f, int d) {
  const std::size_t N = d + 1;
  auto x = nodes(N);
  std::vector<double> fx(N);
  for (std::size_t j = 0; j < N; ++j) fx[j] = f(x[j]);
  std::vector<double> c(N);
  for (std::size_t k = 0; k < N; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j < N; ++j) acc += fx[j] * std::cos(k * (2.0 * j + 1.0) * M_PI / (2.0 * N));
    c[k] = acc * (k == 0 ? 1.0 : 2.0) / N;
  }
  return c;
}

// Monomial coefficients to Chebyshev coefficients.
inline std::vector<double> from_monomial(const std::vector<double>& m) {
  const std::size_t n = m.size();
  std::vector<double> c(n, 0.0);
  // x^k expanded in T_j, built up by repeated multiplication by x
  std::vector<double> xk(n, 0.0);
  if (n == 0) return c;
  xk[0] = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) c[j] += m[k] * xk[j];
    std::vector<double> nxt(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (xk[j] == 0.0) continue;
      // x T_j = (T_{j+1} + T_{|j-1|}) / 2, x T_0 = T_1
      if (j == 0) {
        if (n > 1) nxt[1] += xk[0];
      } else {
        if (j + 1 < n) nxt[j + 1] += 0.5 * xk[j];
        nxt[j - 1] += 0.5 * xk[j];
      }
    }
    xk = nxt;
  }
  return c;
}

// Chebyshev coefficients to monomial coefficients.
inline std::vector<double> to_monomial(const std::vector<double>& c) {
  const std::size_t n = c.size();
  std::vector<double> m(n, 0.0);
  if (n == 0) return m;
  std::vector<double> tprev(n, 0.0), tcur(n, 0.0);
  tprev[0] = 1.0;
  for (std::size_t i = 0; i < n; ++i) m[i] += c[0] * tprev[i];
  if (n == 1) return m;
  tcur[1] = 1.0;
  for (std::size_t i = 0; i < n; ++i) m[i] += c[1] * tcur[i];
  for (std::size_t j = 2; j < n; ++j) {
    std::vector<double> nxt(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) nxt[i + 1] += 2.0 * tcur[i];
    for (std::size_t i = 0; i < n; ++i) nxt[i] -= tprev[i];
    for (std::size_t i = 0; i < n; ++i) m[i] += c[j] * nxt[i];
    tprev = tcur;
    tcur = nxt;
  }
  return m;
}

// max |p| on [-1, 1] over a dense Chebyshev-distributed sample plus the endpoints.
inline double sup_norm(const std::vector<double>& c, std::size_t samples = 0) {
  if (samples == 0) samples = std::max<std::size_t>(2001, 20 * c.size() + 1);
  double best = std::max(std::abs(eval(c, 1.0)), std::abs(eval(c, -1.0)));
  for (std::size_t j = 0; j < samples; ++j)
    best = std::max(best, std::abs(eval(c, std::cos(M_PI * (j + 0.5) / samples))));
  return best;
}

}  // namespace funcprep::cheb
