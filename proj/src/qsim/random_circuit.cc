// Copyright 2026 The QVF Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qvf/qsim/random_circuit.h"

#include <numbers>
#include <numeric>
#include <vector>

#include "qvf/common/rng.h"

namespace qvf::qsim {
namespace {

void random_single(Circuit& c, Rng& rng, int q) {
  switch (rng.below(3)) {
    case 0: c.gate(Gate::h, {q}); break;
    case 1: c.gate(Gate::x, {q}); break;
    default: c.gate(Gate::rz, {q}, rng.uniform(0.0, 2 * std::numbers::pi)); break;
  }
}

}  // namespace

Circuit random_circuit(std::string name, int num_qubits, int depth, uint64_t seed, bool measure,
                       const Deadline& deadline) {
  if (depth < 0) {
    throw CircuitError("depth must be non-negative");
  }
  Circuit c(std::move(name), num_qubits, measure ? num_qubits : 0);
  Rng rng(seed);
  std::vector<int> order(num_qubits);
  for (int layer = 0; layer < depth; ++layer) {
    deadline.check();
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    size_t i = 0;
    for (; i + 1 < order.size(); i += 2) {
      if (rng.bernoulli(0.5)) {
        c.gate(Gate::cx, {order[i], order[i + 1]});
      } else {
        random_single(c, rng, order[i]);
        random_single(c, rng, order[i + 1]);
      }
    }
    if (i < order.size()) {
      random_single(c, rng, order[i]);
    }
  }
  if (measure) {
    c.measure_all();
  }
  return c;
}

}  // namespace qvf::qsim
