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

#include "qvf/qsim/circuit.h"

#include <algorithm>

namespace qvf::qsim {

std::string_view gate_name(Gate g) {
  switch (g) {
    case Gate::x: return "x";
    case Gate::y: return "y";
    case Gate::z: return "z";
    case Gate::h: return "h";
    case Gate::s: return "s";
    case Gate::sdg: return "sdg";
    case Gate::t: return "t";
    case Gate::tdg: return "tdg";
    case Gate::rx: return "rx";
    case Gate::ry: return "ry";
    case Gate::rz: return "rz";
    case Gate::cx: return "cx";
    case Gate::cz: return "cz";
    case Gate::crx: return "crx";
    case Gate::cry: return "cry";
    case Gate::crz: return "crz";
    case Gate::swap: return "swap";
  }
  return "?";
}

std::optional<Gate> parse_gate(std::string_view name) {
  for (Gate g : kAllGates) {
    if (gate_name(g) == name) {
      return g;
    }
  }
  return std::nullopt;
}

int gate_arity(Gate g) {
  switch (g) {
    case Gate::cx:
    case Gate::cz:
    case Gate::crx:
    case Gate::cry:
    case Gate::crz:
    case Gate::swap:
      return 2;
    default:
      return 1;
  }
}

bool gate_is_parametric(Gate g) {
  switch (g) {
    case Gate::rx:
    case Gate::ry:
    case Gate::rz:
    case Gate::crx:
    case Gate::cry:
    case Gate::crz:
      return true;
    default:
      return false;
  }
}

GateOp inverse(const GateOp& op) {
  GateOp inv = op;
  switch (op.gate) {
    case Gate::s: inv.gate = Gate::sdg; break;
    case Gate::sdg: inv.gate = Gate::s; break;
    case Gate::t: inv.gate = Gate::tdg; break;
    case Gate::tdg: inv.gate = Gate::t; break;
    default:
      if (op.theta) {
        inv.theta = -*op.theta;
      }
      break;
  }
  return inv;
}

void validate_gate_op(const GateOp& op) {
  const auto name = std::string(gate_name(op.gate));
  if (static_cast<int>(op.qubits.size()) != gate_arity(op.gate)) {
    throw CircuitError("gate " + name + " expects " + std::to_string(gate_arity(op.gate)) + " qubit(s), got " +
                       std::to_string(op.qubits.size()));
  }
  if (gate_is_parametric(op.gate) != op.theta.has_value()) {
    throw CircuitError(gate_is_parametric(op.gate) ? "gate " + name + " requires an angle"
                                                   : "gate " + name + " takes no angle");
  }
  if (op.qubits.size() == 2 && op.qubits[0] == op.qubits[1]) {
    throw CircuitError("gate " + name + " applied twice to qubit " + std::to_string(op.qubits[0]));
  }
}

Circuit::Circuit(std::string name, int num_qubits, int num_clbits)
    : name_(std::move(name)), num_qubits_(num_qubits), num_clbits_(num_clbits) {
  if (num_qubits < 1) {
    throw CircuitError("circuit needs at least one qubit");
  }
  if (num_qubits > kMaxQubits) {
    throw CircuitError("circuit exceeds the " + std::to_string(kMaxQubits) + "-qubit cap");
  }
  if (num_clbits < 0) {
    throw CircuitError("negative clbit count");
  }
}

void Circuit::check_qubit(int q) const {
  if (q < 0 || q >= num_qubits_) {
    throw CircuitError("qubit index " + std::to_string(q) + " out of range for " + std::to_string(num_qubits_) +
                       "-qubit circuit " + name_);
  }
}

void Circuit::append(GateOp op) {
  validate_gate_op(op);
  for (int q : op.qubits) {
    check_qubit(q);
  }
  ops_.emplace_back(std::move(op));
}

void Circuit::append(const Op& op) {
  if (const auto* g = std::get_if<GateOp>(&op)) {
    append(*g);
  } else {
    const auto& m = std::get<MeasureOp>(op);
    measure(m.qubit, m.clbit);
  }
}

void Circuit::measure(int qubit, int clbit) {
  check_qubit(qubit);
  if (clbit < 0 || clbit >= num_clbits_) {
    throw CircuitError("clbit index " + std::to_string(clbit) + " out of range for circuit " + name_ + " with " +
                       std::to_string(num_clbits_) + " clbit(s)");
  }
  ops_.emplace_back(MeasureOp{qubit, clbit});
}

void Circuit::measure_all() {
  if (num_clbits_ < num_qubits_) {
    throw CircuitError("measure_all on " + name_ + " needs " + std::to_string(num_qubits_) + " clbits");
  }
  for (int q = 0; q < num_qubits_; ++q) {
    measure(q, q);
  }
}

bool Circuit::has_measurements() const {
  return std::any_of(ops_.begin(), ops_.end(), [](const Op& op) { return std::holds_alternative<MeasureOp>(op); });
}

size_t Circuit::count_gates() const {
  return static_cast<size_t>(
      std::count_if(ops_.begin(), ops_.end(), [](const Op& op) { return std::holds_alternative<GateOp>(op); }));
}

}  // namespace qvf::qsim
