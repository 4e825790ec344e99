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

#include "qvf/qsim/simulator.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>

#include "qvf/common/rng.h"

namespace qvf::qsim {
namespace {

using Matrix2 = std::array<Amplitude, 4>;  // row-major

Matrix2 single_qubit_matrix(Gate g, double theta) {
  constexpr Amplitude i{0.0, 1.0};
  const double r = 1.0 / std::numbers::sqrt2;
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  switch (g) {
    case Gate::x: return {0.0, 1.0, 1.0, 0.0};
    case Gate::y: return {0.0, -i, i, 0.0};
    case Gate::z: return {1.0, 0.0, 0.0, -1.0};
    case Gate::h: return {r, r, r, -r};
    case Gate::s: return {1.0, 0.0, 0.0, i};
    case Gate::sdg: return {1.0, 0.0, 0.0, -i};
    case Gate::t: return {1.0, 0.0, 0.0, std::polar(1.0, std::numbers::pi / 4)};
    case Gate::tdg: return {1.0, 0.0, 0.0, std::polar(1.0, -std::numbers::pi / 4)};
    case Gate::rx:
    case Gate::crx: return {c, -i * s, -i * s, c};
    case Gate::ry:
    case Gate::cry: return {c, -s, s, c};
    case Gate::rz:
    case Gate::crz: return {std::polar(1.0, -theta / 2), 0.0, 0.0, std::polar(1.0, theta / 2)};
    case Gate::cx: return {0.0, 1.0, 1.0, 0.0};
    default: break;
  }
  throw CircuitError("no single-qubit matrix for gate " + std::string(gate_name(g)));
}

// Applies m to `target`, restricted to basis states whose bits in `control_mask` are all set.
void apply_matrix(Statevector& state, const Matrix2& m, int target, size_t control_mask) {
  const size_t bit = size_t{1} << target;
  for (size_t i = 0; i < state.size(); ++i) {
    if ((i & bit) || (i & control_mask) != control_mask) {
      continue;
    }
    const Amplitude a0 = state[i];
    const Amplitude a1 = state[i | bit];
    state[i] = m[0] * a0 + m[1] * a1;
    state[i | bit] = m[2] * a0 + m[3] * a1;
  }
}

void check_width(const Circuit& circuit) {
  if (circuit.num_qubits() > kMaxQubits) {
    throw CircuitError("circuit exceeds the qubit cap");
  }
}

// Evolves |0..0> through every gate; measurements are treated as terminal.
Statevector evolve(const Circuit& circuit, const Deadline& deadline) {
  check_width(circuit);
  Statevector state(size_t{1} << circuit.num_qubits(), Amplitude{0.0, 0.0});
  state[0] = 1.0;
  std::vector<bool> measured(circuit.num_qubits(), false);
  for (const auto& op : circuit.ops()) {
    deadline.check();
    if (const auto* m = std::get_if<MeasureOp>(&op)) {
      measured[m->qubit] = true;
      continue;
    }
    const auto& g = std::get<GateOp>(op);
    for (int q : g.qubits) {
      if (q < 0 || q >= circuit.num_qubits()) {
        throw CircuitError("qubit index " + std::to_string(q) + " out of range");
      }
      if (measured[q]) {
        throw CircuitError("gate after measurement on qubit " + std::to_string(q) + " is not supported");
      }
    }
    apply_gate(state, g);
  }
  return state;
}

}  // namespace

void apply_gate(Statevector& state, const GateOp& op) {
  validate_gate_op(op);
  const double theta = op.theta.value_or(0.0);
  switch (op.gate) {
    case Gate::swap: {
      const size_t a = size_t{1} << op.qubits[0];
      const size_t b = size_t{1} << op.qubits[1];
      for (size_t i = 0; i < state.size(); ++i) {
        if ((i & a) && !(i & b)) {
          std::swap(state[i], state[(i & ~a) | b]);
        }
      }
      return;
    }
    case Gate::cz: {
      const size_t mask = (size_t{1} << op.qubits[0]) | (size_t{1} << op.qubits[1]);
      for (size_t i = 0; i < state.size(); ++i) {
        if ((i & mask) == mask) {
          state[i] = -state[i];
        }
      }
      return;
    }
    case Gate::cx:
    case Gate::crx:
    case Gate::cry:
    case Gate::crz:
      apply_matrix(state, single_qubit_matrix(op.gate, theta), op.qubits[1], size_t{1} << op.qubits[0]);
      return;
    default:
      apply_matrix(state, single_qubit_matrix(op.gate, theta), op.qubits[0], 0);
      return;
  }
}

Statevector simulate(const Circuit& circuit, const Deadline& deadline) {
  if (circuit.has_measurements()) {
    throw CircuitError("simulate expects a measurement-free circuit; use the sampler");
  }
  return evolve(circuit, deadline);
}

JobResult sample(const Circuit& circuit, int64_t shots, uint64_t seed, const Deadline& deadline) {
  if (shots < 1) {
    throw CircuitError("sampler needs at least one shot");
  }
  // clbit -> qubit, last measurement wins
  std::map<int, int, std::greater<>> readout;
  for (const auto& op : circuit.ops()) {
    if (const auto* m = std::get_if<MeasureOp>(&op)) {
      readout[m->clbit] = m->qubit;
    }
  }
  if (readout.empty()) {
    throw CircuitError("circuit " + circuit.name() + " has no measurements");
  }
  const Statevector state = evolve(circuit, deadline);
  std::vector<double> cumulative(state.size());
  double total = 0.0;
  for (size_t i = 0; i < state.size(); ++i) {
    total += std::norm(state[i]);
    cumulative[i] = total;
  }

  Rng rng(seed);
  std::vector<int64_t> hits(state.size(), 0);
  for (int64_t s = 0; s < shots; ++s) {
    if ((s & 1023) == 0) {
      deadline.check();
    }
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    size_t index = std::min(static_cast<size_t>(it - cumulative.begin()), state.size() - 1);
    // Skip zero-probability entries that upper_bound can land on through rounding.
    while (index > 0 && std::norm(state[index]) == 0.0) {
      --index;
    }
    ++hits[index];
  }

  JobResult result;
  result.kind = JobKind::counts;
  result.shots = shots;
  result.seed = seed;
  for (size_t i = 0; i < hits.size(); ++i) {
    if (hits[i] == 0) {
      continue;
    }
    std::string bits;
    bits.reserve(readout.size());
    for (const auto& [clbit, qubit] : readout) {
      bits.push_back(((i >> qubit) & 1) ? '1' : '0');
    }
    result.counts[bits] += hits[i];
  }
  return result;
}

double pauli_expectation(const Statevector& state, const std::string& label) {
  const int n = static_cast<int>(label.size());
  if ((size_t{1} << n) != state.size()) {
    throw CircuitError("label " + label + " does not match the state width");
  }
  size_t x_mask = 0;
  size_t z_mask = 0;
  size_t y_mask = 0;
  for (int q = 0; q < n; ++q) {
    const char c = label[n - 1 - q];
    const size_t bit = size_t{1} << q;
    switch (c) {
      case 'I': break;
      case 'X': x_mask |= bit; break;
      case 'Y': x_mask |= bit; y_mask |= bit; break;
      case 'Z': z_mask |= bit; break;
      default: throw CircuitError(std::string("invalid Pauli character '") + c + "'");
    }
  }
  // P|i> = phase(i) |i ^ x_mask>, with Y|0> = i|1> and Y|1> = -i|0>.
  const int y_count = std::popcount(y_mask);
  const Amplitude y_base = std::pow(Amplitude{0.0, 1.0}, y_count);
  Amplitude acc{0.0, 0.0};
  for (size_t i = 0; i < state.size(); ++i) {
    const int sign_flips = std::popcount(i & z_mask) + std::popcount(i & y_mask);
    const Amplitude phase = (sign_flips & 1) ? -y_base : y_base;
    acc += std::conj(state[i ^ x_mask]) * phase * state[i];
  }
  return acc.real();
}

JobResult estimate(const Circuit& circuit, const Observable& observable, const Deadline& deadline) {
  if (observable.num_qubits() != circuit.num_qubits()) {
    throw CircuitError("observable width " + std::to_string(observable.num_qubits()) + " does not match " +
                       std::to_string(circuit.num_qubits()) + "-qubit circuit " + circuit.name());
  }
  const Statevector state = simulate(circuit, deadline);
  double value = 0.0;
  for (const auto& term : observable.terms()) {
    value += term.coeff * pauli_expectation(state, term.label);
  }
  if (!std::isfinite(value)) {
    throw CircuitError("non-finite expectation value");
  }
  JobResult result;
  result.kind = JobKind::expectation;
  result.value = value;
  return result;
}

}  // namespace qvf::qsim
