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
#include <variant>
#include <vector>

#include "json.hpp"
#include "qvf/qlang/interpreter.h"

namespace qvf::verify {

inline constexpr std::string_view kAssertionSchema = "assert/1";

class AssertionSchemaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct VarExists {
  bool operator==(const VarExists&) const = default;
};
struct VarKind {
  std::string kind;
  bool operator==(const VarKind&) const = default;
};
struct CircuitNumQubits {
  int value = 0;
  bool operator==(const CircuitNumQubits&) const = default;
};
struct CircuitNumClbits {
  int value = 0;
  bool operator==(const CircuitNumClbits&) const = default;
};
struct CircuitHasGate {
  qsim::Gate gate = qsim::Gate::x;
  std::vector<int> qubits;
  std::optional<double> theta;
  double tol = 1e-6;
  bool operator==(const CircuitHasGate&) const = default;
};
struct RoutedRespectsCoupling {
  std::string backend;
  bool operator==(const RoutedRespectsCoupling&) const = default;
};
struct RoutedLevel {
  int level = 0;
  bool operator==(const RoutedLevel&) const = default;
};
struct CountsKeysSubset {
  std::vector<std::string> allowed;
  bool operator==(const CountsKeysSubset&) const = default;
};
struct CountsTotal {
  int64_t shots = 0;
  bool operator==(const CountsTotal&) const = default;
};
struct ExpectationClose {
  double value = 0.0;
  double tol = 1e-9;
  bool operator==(const ExpectationClose&) const = default;
};
struct ObservableTerms {
  std::vector<std::string> labels;
  std::vector<double> coeffs;
  double tol = 1e-9;
  bool operator==(const ObservableTerms&) const = default;
};

using AssertionSpec = std::variant<VarExists, VarKind, CircuitNumQubits, CircuitNumClbits, CircuitHasGate,
                                   RoutedRespectsCoupling, RoutedLevel, CountsKeysSubset, CountsTotal,
                                   ExpectationClose, ObservableTerms>;

/// One unit test: a named check against the binding `var`.
struct Assertion {
  std::string name;
  std::string var;
  AssertionSpec spec;

  bool operator==(const Assertion&) const = default;
};

std::string_view assertion_kind(const Assertion& a);

nlohmann::json to_json(const Assertion& a);
/// Validates the `assert/1` object; throws AssertionSchemaError.
Assertion assertion_from_json(const nlohmann::json& j);

nlohmann::json to_json(const std::vector<Assertion>& as);
std::vector<Assertion> assertions_from_json(const nlohmann::json& j);

struct AssertionOutcome {
  bool passed = false;
  std::string message;
};

AssertionOutcome evaluate(const qlang::Env& env, const Assertion& a);

}  // namespace qvf::verify
