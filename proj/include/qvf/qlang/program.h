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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qvf/qsim/circuit.h"
#include "qvf/qsim/observable.h"

namespace qvf::qlang {

/// Version tag of the text format accepted by parse().
inline constexpr std::string_view kFormatVersion = "qlang/1";

enum class Dialect { qlang, pyqiskit };

std::string_view dialect_name(Dialect d);
Dialect parse_dialect(std::string_view name);

/// An angle literal. `text` is the canonical spelling (`pi/4`, `-pi`, `0.75`).
struct Angle {
  double value = 0.0;
  std::string text;

  static Angle from_value(double v);
  bool operator==(const Angle&) const = default;
};

struct CircuitDecl {
  std::string name;
  int num_qubits = 0;
  int num_clbits = 0;
  bool operator==(const CircuitDecl&) const = default;
};

struct GateStmt {
  qsim::Gate gate = qsim::Gate::x;
  std::string circuit;
  std::vector<int> qubits;
  std::optional<Angle> theta;
  bool operator==(const GateStmt&) const = default;
};

struct MeasureStmt {
  std::string circuit;
  int qubit = 0;
  int clbit = 0;
  bool operator==(const MeasureStmt&) const = default;
};

struct MeasureAllStmt {
  std::string circuit;
  bool operator==(const MeasureAllStmt&) const = default;
};

struct BackendStmt {
  std::string name;
  std::string backend_id;
  bool operator==(const BackendStmt&) const = default;
};

struct ObservableStmt {
  std::string name;
  std::vector<qsim::PauliTerm> terms;
  bool operator==(const ObservableStmt&) const = default;
};

struct TranspileStmt {
  std::string out;
  std::string circuit;
  std::string backend;
  int level = 0;
  bool operator==(const TranspileStmt&) const = default;
};

struct SamplerStmt {
  std::string job;
  std::string circuit;
  int64_t shots = 0;
  uint64_t seed = 0;
  bool operator==(const SamplerStmt&) const = default;
};

struct EstimatorStmt {
  std::string job;
  std::string circuit;
  std::string observable;
  bool operator==(const EstimatorStmt&) const = default;
};

struct RandomCircuitStmt {
  std::string name;
  int num_qubits = 0;
  int depth = 0;
  uint64_t seed = 0;
  bool measure = false;
  bool operator==(const RandomCircuitStmt&) const = default;
};

using StatementBody = std::variant<CircuitDecl, GateStmt, MeasureStmt, MeasureAllStmt, BackendStmt, ObservableStmt,
                                   TranspileStmt, SamplerStmt, EstimatorStmt, RandomCircuitStmt>;

struct Statement {
  StatementBody body;
  /// 1-based source line; 0 for synthesized statements.
  int line = 0;

  /// Line numbers are provenance, not content.
  bool operator==(const Statement& other) const { return body == other.body; }
};

/// Name introduced by a binding statement, if any.
std::optional<std::string> bound_name(const Statement& s);
/// Every binding name the statement reads.
std::vector<std::string> referenced_names(const Statement& s);
/// Applies `rename` to the bound name and every reference.
void rename_binding(Statement& s, const std::string& from, const std::string& to);

struct Program {
  Dialect dialect = Dialect::qlang;
  std::string source;
  std::vector<Statement> statements;
};

std::string render(const Statement& s);
/// Canonical text: one statement per line, each terminated by '\n'.
std::string render(const std::vector<Statement>& statements);

/// Error raised while reading qlang text.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

Program parse(std::string_view source);
Angle parse_angle(std::string_view token);

}  // namespace qvf::qlang
