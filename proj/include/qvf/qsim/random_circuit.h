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

#include <cstdint>
#include <string>

#include "qvf/common/deadline.h"
#include "qvf/qsim/circuit.h"

namespace qvf::qsim {

/// Layered random circuit. Each layer shuffles the qubits and pairs
/// neighbours; a pair gets a CX with probability 1/2, otherwise one gate from
/// {h, x, rz(U[0, 2pi))} on each qubit. An unpaired qubit gets one such gate.
/// With `measure`, every qubit is measured into the clbit of the same index.
Circuit random_circuit(std::string name, int num_qubits, int depth, uint64_t seed, bool measure,
                       const Deadline& deadline = Deadline::never());

}  // namespace qvf::qsim
