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

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qvf::qsim {

/// Largest register the statevector simulator accepts.
inline constexpr int kMaxQubits = 14;

class CircuitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Gate { x, y, z, h, s, sdg, t, tdg, rx, ry, rz, cx, cz, crx, cry, crz, swap };

inline constexpr Gate kAllGates[] = {Gate::x,  Gate::y,  Gate::z,  Gate::h,   Gate::s,   Gate::sdg,
                                     Gate::t,  Gate::tdg, Gate::rx, Gate::ry,  Gate::rz,  Gate::cx,
                                     Gate::cz, Gate::crx, Gate::cry, Gate::crz, Gate::swap};

std::string_view gate_name(Gate g);
std::optional<Gate> parse_gate(std::string_view name);
int gate_arity(Gate g);
bool gate_is_parametric(Gate g);

struct GateOp {
  Gate gate;
  std::vector<int> qubits;
  std::optional<double> theta;

  bool operator==(const GateOp&) const = default;
};

struct MeasureOp {
  int qubit;
  int clbit;

  bool operator==(const MeasureOp&) const = default;
};

using Op = std::variant<GateOp, MeasureOp>;

/// The op that undoes `op` (rotations negate their angle).
GateOp inverse(const GateOp& op);

/// Checks arity, parameter presence and distinct qubit arguments.
void validate_gate_op(const GateOp& op);

class Circuit {
 public:
  Circuit(std::string name, int num_qubits, int num_clbits);

  const std::string& name() const { return name_; }
  int num_qubits() const { return num_qubits_; }
  int num_clbits() const { return num_clbits_; }
  const std::vector<Op>& ops() const { return ops_; }

  void append(GateOp op);
  void append(const Op& op);
  void gate(Gate g, std::vector<int> qubits, std::optional<double> theta = std::nullopt) {
    append(GateOp{g, std::move(qubits), theta});
  }
  void measure(int qubit, int clbit);
  /// Measures every qubit into the clbit of the same index.
  void measure_all();

  bool has_measurements() const;
  size_t count_gates() const;
  void rename(std::string name) { name_ = std::move(name); }

  bool operator==(const Circuit&) const = default;

 private:
  void check_qubit(int q) const;

  std::string name_;
  int num_qubits_;
  int num_clbits_;
  std::vector<Op> ops_;
};

}  // namespace qvf::qsim
