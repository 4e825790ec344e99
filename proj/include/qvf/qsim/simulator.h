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

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qvf/common/deadline.h"
#include "qvf/qsim/circuit.h"
#include "qvf/qsim/observable.h"

namespace qvf::qsim {

using Amplitude = std::complex<double>;
/// Basis index bit q holds qubit q (little-endian).
using Statevector = std::vector<Amplitude>;

enum class JobKind { counts, expectation };

struct JobResult {
  JobKind kind = JobKind::counts;
  /// Bitstrings list measured clbits from highest index (left) to lowest.
  std::map<std::string, int64_t> counts;
  double value = 0.0;
  int64_t shots = 0;
  uint64_t seed = 0;

  bool operator==(const JobResult&) const = default;
};

void apply_gate(Statevector& state, const GateOp& op);

/// Exact statevector of a measurement-free circuit.
Statevector simulate(const Circuit& circuit, const Deadline& deadline = Deadline::never());

/// Draws `shots` outcomes of the circuit's terminal measurements.
JobResult sample(const Circuit& circuit, int64_t shots, uint64_t seed, const Deadline& deadline = Deadline::never());

/// Exact expectation value of `observable` in the circuit's final state.
JobResult estimate(const Circuit& circuit, const Observable& observable, const Deadline& deadline = Deadline::never());

/// <psi|P|psi> for a single Pauli label.
double pauli_expectation(const Statevector& state, const std::string& label);

}  // namespace qvf::qsim
