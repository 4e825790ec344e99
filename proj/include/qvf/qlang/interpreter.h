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

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "qvf/common/deadline.h"
#include "qvf/qlang/program.h"
#include "qvf/qsim/backend.h"
#include "qvf/qsim/observable.h"
#include "qvf/qsim/simulator.h"
#include "qvf/qsim/random_circuit.h"
#include "qvf/qsim/transpile.h"

namespace qvf::qlang {

using Value = std::variant<qsim::Circuit, qsim::Backend, qsim::Observable, qsim::JobResult, qsim::RoutedCircuit>;

/// "circuit", "backend", "observable", "job" or "routed".
std::string_view value_kind(const Value& v);

/// Named objects produced by executing a program.
class Env {
 public:
  /// Throws std::invalid_argument on a duplicate name.
  void bind(const std::string& name, Value value);
  const Value* find(const std::string& name) const;
  bool contains(const std::string& name) const { return find(name) != nullptr; }
  size_t size() const { return bindings_.size(); }
  const std::map<std::string, Value>& bindings() const { return bindings_; }

  bool operator==(const Env&) const = default;

 private:
  friend class Interpreter;
  Value* find_mutable(const std::string& name);

  std::map<std::string, Value> bindings_;
};

/// Failure while executing a parsed program.
class RuntimeError : public std::runtime_error {
 public:
  RuntimeError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Executes statements in order. Any failure aborts with RuntimeError;
/// an exhausted deadline propagates as TimeoutError.
Env interpret(const Program& program, const Deadline& deadline = Deadline::never());

}  // namespace qvf::qlang
