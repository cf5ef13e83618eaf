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
#include <complex>
#include <cstdint>
#include <vector>

#include "funcprep/circuit.hpp"
#include "funcprep/errors.hpp"

namespace funcprep {

using cplx = std::complex<double>;

inline constexpr int kMaxSimWidth = 24;
inline constexpr int kMaxBlockQubits = 12;

class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(int width) : width_(width) {
    if (width < 0 || width > kMaxSimWidth)
      throw ResourceError("state width " + std::to_string(width) + " exceeds the simulator cap of " +
                          std::to_string(kMaxSimWidth));
    amp_.assign(std::size_t{1} << width, cplx(0.0, 0.0));
    amp_[0] = 1.0;
  }

  static StateVector basis(int width, std::uint64_t index) {
    StateVector s(width);
    if (index >= s.dim()) throw LayoutError("basis index out of range");
    s.amp_[0] = 0.0;
    s.amp_[index] = 1.0;
    return s;
  }

  int width() const { return width_; }
  std::size_t dim() const { return amp_.size(); }
  cplx& operator[](std::size_t i) { return amp_[i]; }
  const cplx& operator[](std::size_t i) const { return amp_[i]; }
  std::vector<cplx>& data() { return amp_; }
  const std::vector<cplx>& data() const { return amp_; }

  double norm2() const {
    double s = 0.0;
    for (const auto& a : amp_) s += std::norm(a);
    return s;
  }

 private:
  int width_ = 0;
  std::vector<cplx> amp_;
};

namespace detail {

// Applies [[m00 m01][m10 m11]] to qubit t.
inline void apply_matrix(std::vector<cplx>& v, int t, cplx m00, cplx m01, cplx m10, cplx m11) {
  const std::size_t step = std::size_t{1} << t, n = v.size();
  for (std::size_t hi = 0; hi < n; hi += 2 * step)
    for (std::size_t i = hi; i < hi + step; ++i) {
      cplx a = v[i], b = v[i + step];
      v[i] = m00 * a + m01 * b;
      v[i + step] = m10 * a + m11 * b;
    }
}

inline void apply_diag(std::vector<cplx>& v, int t, cplx d0, cplx d1) {
  const std::size_t step = std::size_t{1} << t, n = v.size();
  const bool skip0 = d0 == cplx(1.0, 0.0);
  for (std::size_t hi = 0; hi < n; hi += 2 * step)
    for (std::size_t i = hi; i < hi + step; ++i) {
      if (!skip0) v[i] *= d0;
      v[i + step] *= d1;
    }
}

inline void apply_x(std::vector<cplx>& v, int t, std::size_t cmask) {
  const std::size_t step = std::size_t{1} << t, n = v.size();
  for (std::size_t hi = 0; hi < n; hi += 2 * step)
    for (std::size_t i = hi; i < hi + step; ++i)
      if ((i & cmask) == cmask) std::swap(v[i], v[i + step]);
}

}  // namespace detail

inline void apply(StateVector& s, const Gate& g) {
  auto& v = s.data();
  const int t = g.target;
  const double h = 0.5 * g.angle;
  const double r = 1.0 / std::sqrt(2.0);
  const cplx I(0.0, 1.0);
  switch (g.kind) {
    case GateKind::RX:
      detail::apply_matrix(v, t, std::cos(h), -I * std::sin(h), -I * std::sin(h), std::cos(h));
      break;
    case GateKind::RY:
      detail::apply_matrix(v, t, std::cos(h), -std::sin(h), std::sin(h), std::cos(h));
      break;
    case GateKind::RZ: detail::apply_diag(v, t, std::polar(1.0, -h), std::polar(1.0, h)); break;
    case GateKind::PHASE: detail::apply_diag(v, t, 1.0, std::polar(1.0, g.angle)); break;
    case GateKind::H: detail::apply_matrix(v, t, r, r, r, -r); break;
    case GateKind::X: detail::apply_x(v, t, 0); break;
    case GateKind::Y: detail::apply_matrix(v, t, 0.0, -I, I, 0.0); break;
    case GateKind::Z: detail::apply_diag(v, t, 1.0, -1.0); break;
    case GateKind::S: detail::apply_diag(v, t, 1.0, I); break;
    case GateKind::SDG: detail::apply_diag(v, t, 1.0, -I); break;
    case GateKind::CX: detail::apply_x(v, t, std::size_t{1} << g.c0); break;
    case GateKind::CCX:
      detail::apply_x(v, t, (std::size_t{1} << g.c0) | (std::size_t{1} << g.c1));
      break;
  }
}

inline void run_into(StateVector& s, const Circuit& c) {
  if (s.width() != c.width()) throw LayoutError("state and circuit widths differ");
  for (const auto& g : c.gates()) apply(s, g);
}

inline StateVector run(const Circuit& c) {
  if (c.width() > kMaxSimWidth)
    throw ResourceError("circuit width " + std::to_string(c.width()) + " exceeds the simulator cap of " +
                        std::to_string(kMaxSimWidth));
  StateVector s(c.width());
  run_into(s, c);
  return s;
}

inline std::size_t mask_of(const std::vector<int>& qubits) {
  std::size_t m = 0;
  for (int q : qubits) m |= std::size_t{1} << q;
  return m;
}

struct Projection {
  StateVector state;  // renormalized, full width
  double probability = 0.0;
};

// Post-selects every qubit in `qubits` onto |0>.
inline Projection project_zero(const StateVector& s, const std::vector<int>& qubits) {
  const std::size_t m = mask_of(qubits);
  Projection p;
  p.state = s;
  auto& v = p.state.data();
  double prob = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i & m)
      v[i] = 0.0;
    else
      prob += std::norm(v[i]);
  }
  if (prob < 1e-300) throw DegenerateProjection("post-selection branch has zero probability");
  const double inv = 1.0 / std::sqrt(prob);
  for (auto& a : v) a *= inv;
  p.probability = prob;
  return p;
}

// Probability mass outside |0> on the given qubits.
inline double verify_pure_ancillas(const StateVector& s, const std::vector<int>& ancillas) {
  const std::size_t m = mask_of(ancillas);
  double leak = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i)
    if (i & m) leak += std::norm(s[i]);
  return leak;
}

// Same, restricted to the sector where `sector` qubits read zero (and not
// renormalized).
inline double sector_leakage(const StateVector& s, const std::vector<int>& ancillas,
                             const std::vector<int>& sector) {
  const std::size_t m = mask_of(ancillas), z = mask_of(sector);
  double leak = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i)
    if (!(i & z) && (i & m)) leak += std::norm(s[i]);
  return leak;
}

// Index into the full register for main-register value k with every other qubit zero.
inline std::size_t embed(const std::vector<int>& qubits, std::uint64_t k) {
  std::size_t idx = 0;
  for (std::size_t j = 0; j < qubits.size(); ++j)
    if ((k >> j) & 1u) idx |= std::size_t{1} << qubits[j];
  return idx;
}

// Amplitudes on `qubits` (little endian) with all other qubits reading zero.
inline std::vector<cplx> restrict_to(const StateVector& s, const std::vector<int>& qubits) {
  std::vector<cplx> out(std::size_t{1} << qubits.size());
  for (std::uint64_t k = 0; k < out.size(); ++k) out[k] = s[embed(qubits, k)];
  return out;
}

// Dense matrix <0_rest, i|U|0_rest, j> over `data` qubits, row-major.
inline std::vector<cplx> extract_block(const Circuit& c, const std::vector<int>& data) {
  if (static_cast<int>(data.size()) > kMaxBlockQubits)
    throw ResourceError("block extraction limited to " + std::to_string(kMaxBlockQubits) + " data qubits");
  if (c.width() > kMaxSimWidth) throw ResourceError("circuit too wide for block extraction");
  const std::size_t d = std::size_t{1} << data.size();
  std::vector<cplx> m(d * d);
  for (std::uint64_t j = 0; j < d; ++j) {
    StateVector s = StateVector::basis(c.width(), embed(data, j));
    run_into(s, c);
    for (std::uint64_t i = 0; i < d; ++i) m[i * d + j] = s[embed(data, i)];
  }
  return m;
}

inline double fidelity(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) throw LayoutError("fidelity: size mismatch");
  cplx ov = 0.0;
  double na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ov += std::conj(a[i]) * b[i];
    na += std::norm(a[i]);
    nb += std::norm(b[i]);
  }
  return std::min(1.0, std::norm(ov) / (na * nb));
}

}  // namespace funcprep
