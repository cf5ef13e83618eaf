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

#include <cstdint>
#include <string>

#include "funcprep/circuit.hpp"

namespace funcprep {

// A closed-form resource ceiling with the formula it evaluates.
struct CensusBound {
  std::string formula_one_qubit;
  std::string formula_cnots;
  std::int64_t one_qubit_ops = 0;
  std::int64_t cnots = 0;

  bool holds(const GateCensus& c) const {
    return static_cast<std::int64_t>(c.one_qubit_ops) <= one_qubit_ops &&
           static_cast<std::int64_t>(c.cnots) <= cnots;
  }
  double ratio(const GateCensus& c) const {
    double a = static_cast<double>(c.one_qubit_ops) / static_cast<double>(one_qubit_ops);
    double b = static_cast<double>(c.cnots) / static_cast<double>(cnots);
    return a > b ? a : b;
  }
};

namespace bounds {

using i64 = std::int64_t;

inline CensusBound multi_control(i64 n) {
  return {"16n-16", "12n-12", 16 * n - 16, 12 * n - 12};
}

inline CensusBound binary_norm_prep(i64 n) {
  return {"8n^2-22n+15", "6n^2-6n+10", 8 * n * n - 22 * n + 15, 6 * n * n - 6 * n + 10};
}

inline CensusBound diagonal_encoding_aux(i64 h) {
  return {"528h-463", "428h-378", 528 * h - 463, 428 * h - 378};
}

inline CensusBound amplitude_oracle_x(i64 n) {
  return {"2304n^2-1064n-109", "1864n^2-860n-92", 2304 * n * n - 1064 * n - 109, 1864 * n * n - 860 * n - 92};
}

inline CensusBound polynomial_oracle(i64 q, i64 n) {
  return {"2304qn^2-1064qn-108q", "1864qn^2-860qn-92q", 2304 * q * n * n - 1064 * q * n - 108 * q,
          1864 * q * n * n - 860 * q * n - 92 * q};
}

inline CensusBound state_preparation(i64 Q, i64 n) {
  return {"2304Qn^2+17216n^2-1064Qn-1064n-37Q-7700", "1864Qn^2+17656n^2-2128n-894Q-6865",
          2304 * Q * n * n + 17216 * n * n - 1064 * Q * n - 1064 * n - 37 * Q - 7700,
          1864 * Q * n * n + 17656 * n * n - 2128 * n - 894 * Q - 6865};
}

inline CensusBound comparator(i64 n) {
  return {"16n+34", "12n-4", 16 * n + 34, 12 * n - 4};
}

inline CensusBound prepare_alpha() { return {"6", "3", 6, 3}; }

}  // namespace bounds
}  // namespace funcprep
