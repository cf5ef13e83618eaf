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

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "funcprep/bounds.hpp"
#include "funcprep/chebyshev.hpp"
#include "funcprep/errors.hpp"
#include "funcprep/lcu.hpp"
#include "funcprep/piecewise.hpp"

namespace funcprep {

inline constexpr int kMaxMonomialDegree = 30;

struct SeriesParams {
  double t = 1.0;         // cos, sin frequency
  double sigma = 1.0;     // gaussian width
  double delta = 2.0;     // reciprocal: domain |x| >= 1/delta
  int order = 0;          // bessel order
  double scale = 1.0;     // sigmoid input scale
  double epsilon = 1e-3;  // reciprocal target fixing K
  double slope = 0.01;    // leaky relu negative slope
};

struct SeriesRow {
  std::string name;
  Basis basis;
  bool certified;
  std::string domain;
};

inline const std::vector<SeriesRow>& series_rows() {
  static const std::vector<SeriesRow> rows = {
      {"exp", Basis::Monomial, true, "|x| <= 1"},
      {"cos", Basis::Chebyshev, true, "x in [-1, 1]"},
      {"sin", Basis::Chebyshev, true, "x in [-1, 1]"},
      {"gaussian", Basis::Monomial, false, "|x| <= 1"},
      {"sigmoid", Basis::Monomial, false, "|scale x| < pi/2"},
      {"tanh", Basis::Monomial, false, "|x| < pi/2"},
      {"reciprocal", Basis::Chebyshev, true, "x in [-1, -1/delta] U [1/delta, 1]"},
      {"bessel_J", Basis::Monomial, true, "|x| <= 1"},
  };
  return rows;
}

inline const SeriesRow& series_row(const std::string& name) {
  for (const auto& r : series_rows())
    if (r.name == name) return r;
  throw DomainError("unknown series name: " + name);
}

// J_0(t)..J_N(t) by normalized backward recurrence.
inline std::vector<double> bessel_j_values(int N, double t) {
  std::vector<double> J(N + 1, 0.0);
  if (t == 0.0) {
    J[0] = 1.0;
    return J;
  }
  const double at = std::abs(t);
  const int top = std::max(N, static_cast<int>(at));
  int M = top + 16 + static_cast<int>(std::sqrt(40.0 * top));
  M += M % 2;
  std::vector<double> j(M + 2, 0.0);
  j[M] = 1e-30;
  for (int k = M; k >= 1; --k) {
    j[k - 1] = (2.0 * k / at) * j[k] - j[k + 1];
    if (std::abs(j[k - 1]) > 1e250)
      for (int i = k - 1; i <= M; ++i) j[i] *= 1e-250;
  }
  double norm = j[0];
  for (int k = 2; k <= M; k += 2) norm += 2.0 * j[k];
  for (int s = 0; s <= N; ++s) J[s] = ((t < 0 && s % 2) ? -1.0 : 1.0) * j[s] / norm;
  return J;
}

// B_0..B_m exactly, rounded to double.
inline std::vector<double> bernoulli_numbers(int m) {
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::cpp_rational;
  std::vector<cpp_rational> B(m + 1);
  B[0] = 1;
  for (int k = 1; k <= m; ++k) {
    cpp_rational acc = 0;
    cpp_int binom = 1;  // C(k+1, j)
    for (int j = 0; j < k; ++j) {
      acc += cpp_rational(binom) * B[j];
      binom = binom * (k + 1 - j) / (j + 1);
    }
    B[k] = -acc / (k + 1);
  }
  std::vector<double> out;
  for (const auto& b : B) out.push_back(b.convert_to<double>());
  return out;
}

namespace detail {

inline double factorial(int s) { return std::tgamma(s + 1.0); }

inline void check_params(const std::string& name, const SeriesParams& p) {
  if (name == "gaussian" && !(p.sigma > 0)) throw DomainError("gaussian needs sigma > 0");
  if (name == "sigmoid" && !(std::abs(p.scale) > 0 && std::abs(p.scale) <= M_PI / 2))
    throw DomainError("sigmoid scale must satisfy 0 < |scale| <= pi/2");
  if (name == "reciprocal" && !(p.delta > 1)) throw DomainError("reciprocal needs delta > 1");
  if (name == "reciprocal" && !(p.epsilon > 0)) throw DomainError("reciprocal needs epsilon > 0");
  if (name == "bessel_J" && p.order < 0) throw DomainError("bessel order must be >= 0");
}

// 2^{2s}(2^{2s}-1)B_{2s}/(2s)!
inline double tanh_coefficient(int s) {
  static const std::vector<double> B = bernoulli_numbers(60);
  if (2 * s > 60) throw DomainError("series order beyond the Bernoulli table");
  const double p = std::ldexp(1.0, 2 * s);
  return p * (p - 1.0) * B[2 * s] / factorial(2 * s);
}

inline int reciprocal_K(const SeriesParams& p) {
  return static_cast<int>(std::ceil(p.delta * p.delta * std::log(p.delta / p.epsilon)));
}

inline double formula(const std::string& name, int k, const SeriesParams& p) {
  if (name == "exp") return std::ldexp(1.0, -k);
  if (name == "cos" || name == "sin") {
    const double m = k + 1.0;
    return 1.07 / std::sqrt(2.0 * m) * std::pow(M_E * std::abs(p.t) / (4.0 * m), 2.0 * m);
  }
  if (name == "gaussian") {
    const double N = 1.0 / (p.sigma * std::sqrt(2.0 * M_PI));
    return N / factorial(k + 1) * std::pow(1.0 / (2.0 * p.sigma * p.sigma), k + 1);
  }
  if (name == "sigmoid") return std::abs(tanh_coefficient(k + 1));
  if (name == "tanh") return std::abs(tanh_coefficient(k + 1));
  if (name == "reciprocal") {
    const double ld = std::log(p.delta);
    const double kd = k / p.delta;
    const double trunc = std::exp(-(-ld + std::sqrt(ld * ld + 4.0 * kd * kd)) / 2.0);
    return trunc + p.delta * std::pow(1.0 - 1.0 / (p.delta * p.delta), reciprocal_K(p));
  }
  if (name == "bessel_J") return std::ldexp(1.0, -(k + p.order));
  throw DomainError("unknown series name: " + name);
}

}  // namespace detail

// Polynomial degree of the truncation with index k.
inline int series_degree(const std::string& name, int k, const SeriesParams& p) {
  series_row(name);
  if (name == "cos" || name == "gaussian") return 2 * k;
  if (name == "sin" || name == "reciprocal") return 2 * k + 1;
  if (name == "sigmoid" || name == "tanh") return std::max(2 * k - 1, 0);
  if (name == "bessel_J") return 2 * k + p.order;
  return k;
}

// Largest k whose truncation is representable.
inline int series_max_index(const std::string& name, const SeriesParams& p) {
  if (name == "sigmoid" || name == "tanh") return 29;
  if (name == "reciprocal") return std::min(detail::reciprocal_K(p) - 1, (kMaxDegree - 1) / 2);
  int k = 0;
  while (series_degree(name, k + 1, p) <= kMaxDegree) ++k;
  return k;
}

// The row's error expression, made non-increasing in k by a running minimum.
inline double error_bound(const std::string& name, int k, const SeriesParams& p = {}) {
  series_row(name);
  detail::check_params(name, p);
  if (k < 0) throw DomainError("series index must be >= 0");
  double best = detail::formula(name, 0, p);
  for (int j = 1; j <= k; ++j) best = std::min(best, detail::formula(name, j, p));
  return best;
}

// The named function itself.
inline double series_value(const std::string& name, double x, const SeriesParams& p = {}) {
  if (name == "exp") return std::exp(x);
  if (name == "cos") return std::cos(p.t * x);
  if (name == "sin") return std::sin(p.t * x);
  if (name == "gaussian") return std::exp(-0.5 * (x / p.sigma) * (x / p.sigma)) / (p.sigma * std::sqrt(2.0 * M_PI));
  if (name == "sigmoid") return 1.0 / (1.0 + std::exp(-p.scale * x));
  if (name == "tanh") return std::tanh(x);
  if (name == "reciprocal") return 1.0 / x;
  if (name == "bessel_J") {
    const double v = std::cyl_bessel_j(static_cast<double>(p.order), std::abs(x));
    return (x < 0 && p.order % 2) ? -v : v;
  }
  throw DomainError("unknown series name: " + name);
}

// Sampling domain of the certificate as closed intervals.
inline std::vector<std::pair<double, double>> series_domain(const std::string& name, const SeriesParams& p = {}) {
  series_row(name);
  if (name == "reciprocal") return {{-1.0, -1.0 / p.delta}, {1.0 / p.delta, 1.0}};
  return {{-1.0, 1.0}};
}

// Truncation with index k in the row's native basis (monomial rows above
// degree 30 switch to Chebyshev).
inline FunctionSpec truncate_series(const std::string& name, int k, const SeriesParams& p = {}) {
  const auto& row = series_row(name);
  detail::check_params(name, p);
  if (k < 0 || k > series_max_index(name, p)) throw DomainError("series index out of range");
  const int d = series_degree(name, k, p);
  std::vector<double> c(d + 1, 0.0);
  if (name == "exp") {
    for (int s = 0; s <= k; ++s) c[s] = 1.0 / detail::factorial(s);
  } else if (name == "cos") {
    auto J = bessel_j_values(2 * k, p.t);
    c[0] = J[0];
    for (int s = 1; s <= k; ++s) c[2 * s] = 2.0 * (s % 2 ? -1.0 : 1.0) * J[2 * s];
  } else if (name == "sin") {
    auto J = bessel_j_values(2 * k + 1, p.t);
    for (int s = 0; s <= k; ++s) c[2 * s + 1] = 2.0 * (s % 2 ? -1.0 : 1.0) * J[2 * s + 1];
  } else if (name == "gaussian") {
    const double N = 1.0 / (p.sigma * std::sqrt(2.0 * M_PI));
    for (int s = 0; s <= k; ++s)
      c[2 * s] = N * (s % 2 ? -1.0 : 1.0) / detail::factorial(s) * std::pow(1.0 / (2.0 * p.sigma * p.sigma), s);
  } else if (name == "sigmoid") {
    c[0] = 0.5;
    for (int s = 1; s <= k; ++s) c[2 * s - 1] = 0.5 * detail::tanh_coefficient(s) * std::pow(p.scale / 2.0, 2 * s - 1);
  } else if (name == "tanh") {
    for (int s = 1; s <= k; ++s) c[2 * s - 1] = detail::tanh_coefficient(s);
  } else if (name == "reciprocal") {
    const int K = detail::reciprocal_K(p);
    // tail[s] = sum_{s' >= s} C(2K, K+s') / 4^K
    std::vector<double> w(K + 2, 0.0);
    for (int s = K; s >= 1; --s)
      w[s] = w[s + 1] + std::exp(std::lgamma(2.0 * K + 1) - std::lgamma(K + s + 1.0) - std::lgamma(K - s + 1.0) -
                                 2.0 * K * std::log(2.0));
    for (int j = 0; j <= k; ++j) c[2 * j + 1] = 4.0 * (j % 2 ? -1.0 : 1.0) * w[j + 1];
  } else if (name == "bessel_J") {
    for (int s = 0; s <= k; ++s)
      c[2 * s + p.order] =
          (s % 2 ? -1.0 : 1.0) / (detail::factorial(s) * detail::factorial(s + p.order)) * std::ldexp(1.0, -(2 * s + p.order));
  }
  FunctionSpec f;
  f.name = name;
  f.basis = row.basis;
  f.certified = row.certified;
  f.epsilon = error_bound(name, k, p);
  if (f.basis == Basis::Monomial && d > kMaxMonomialDegree) {
    const std::vector<double> m = c;
    c = cheb::interpolate([&](double x) { return cheb::eval_monomial(m, x); }, d);
    f.basis = Basis::Chebyshev;
  }
  f.coeffs.assign(c.begin(), c.end());
  return f;
}

// Smallest truncation index with error_bound <= epsilon.
inline int series_index_for(const std::string& name, const SeriesParams& p, double epsilon) {
  if (!(epsilon > 0)) throw DomainError("epsilon must be positive");
  const int kmax = series_max_index(name, p);
  for (int k = 0; k <= kmax; ++k)
    if (error_bound(name, k, p) <= epsilon) return k;
  throw DomainError("epsilon not reachable within the degree cap of 200");
}

inline FunctionSpec expand(const std::string& name, SeriesParams p, double epsilon) {
  series_row(name);
  if (name == "reciprocal") p.epsilon = epsilon;
  return truncate_series(name, series_index_for(name, p, epsilon), p);
}

struct DegreeRow {
  std::string name;
  int k = 0;
  int degree = 0;
  double bound = 0.0;
  bool certified = true;
  std::string domain;
  CensusBound predicted;
};

inline DegreeRow degree_table(const std::string& name, SeriesParams p, double epsilon, int n) {
  const auto& row = series_row(name);
  if (name == "reciprocal") p.epsilon = epsilon;
  DegreeRow r;
  r.name = name;
  r.k = series_index_for(name, p, epsilon);
  r.degree = series_degree(name, r.k, p);
  r.bound = error_bound(name, r.k, p);
  r.certified = row.certified;
  r.domain = row.domain;
  r.predicted = bounds::state_preparation(r.degree, n);
  return r;
}

// ReLU-type functions as two linear pieces meeting at 0.
inline PiecewiseSpec relu_spec(double left_slope = 0.0, double right_slope = 1.0) {
  PiecewiseSpec p;
  FunctionSpec l, r;
  l.name = "relu_left";
  l.coeffs = {0.0, left_slope};
  r.name = "relu_right";
  r.coeffs = {0.0, right_slope};
  p.pieces = {l, r};
  p.breakpoints = {0.0};
  return p;
}

inline bool is_piecewise_row(const std::string& name) { return name == "relu" || name == "leaky_relu"; }

}  // namespace funcprep
