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

#pragma once

#include <vector>

#include "qvf/qsim/backend.h"
#include "qvf/qsim/circuit.h"
#include "qvf/qsim/simulator.h"

namespace qvf::qsim {

/// Output of transpile(). The circuit acts on the backend's physical
/// qubits; final_layout[v] is the physical qubit that holds virtual qubit v
/// at the end of the circuit. Virtual qubits beyond the input width are
/// ancillas that start in |0>.
struct RoutedCircuit {
  Circuit circuit;
  std::vector<int> final_layout;
  int level = 0;
  std::string backend_id;

  bool operator==(const RoutedCircuit&) const = default;
};

/// Routes every two-qubit gate onto a coupling edge by greedy SWAP insertion
/// along a shortest path. Level >= 1 also cancels adjacent inverse pairs;
/// levels 2 and 3 behave like level 1.
RoutedCircuit transpile(const Circuit& circuit, const Backend& backend, int level);

/// Removes adjacent gate pairs that multiply to identity until none remain.
std::vector<Op> cancel_inverse_pairs(const std::vector<Op>& ops);

/// True when every two-qubit gate of `circuit` lies on a coupling edge.
bool respects_coupling(const Circuit& circuit, const Backend& backend);

/// Reads the routed statevector back in virtual-qubit order, keeping the
/// first `num_logical` virtual qubits. Throws if any ancilla is excited.
Statevector unpermute(const Statevector& routed_state, const std::vector<int>& final_layout, int num_logical);

}  // namespace qvf::qsim
