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

#include <random>
#include <vector>

#include "funcprep/circuit.hpp"

namespace testutil {

// Random circuit over the full alphabet on qubits [0, w); CCX included when allowed.
inline funcprep::Circuit random_circuit(const funcprep::QubitLayout& layout, int gates, std::mt19937& rng,
                                        bool with_ccx = true, int w = -1) {
  using K = funcprep::GateKind;
  if (w < 0) w = layout.width();
  funcprep::Builder b(layout);
  std::uniform_int_distribution<int> kind(0, with_ccx ? 11 : 10);
  std::uniform_int_distribution<int> q(0, w - 1);
  std::uniform_real_distribution<double> ang(-3.5, 3.5);
  for (int i = 0; i < gates; ++i) {
    K k = static_cast<K>(kind(rng));
    funcprep::Gate g{k, q(rng)};
    if (funcprep::is_rotation(k)) g.angle = ang(rng);
    if (g.num_controls() >= 1) {
      if (w < g.num_controls() + 1) continue;
      do g.c0 = q(rng); while (g.c0 == g.target);
    }
    if (g.num_controls() == 2) {
      do g.c1 = q(rng); while (g.c1 == g.target || g.c1 == g.c0);
    }
    b.add(g);
  }
  return std::move(b).build();
}

}  // namespace testutil
