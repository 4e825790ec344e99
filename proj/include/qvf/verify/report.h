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

#include <string>
#include <string_view>
#include <vector>

#include "qvf/verify/assertion.h"

namespace qvf::verify {

enum class ExecutionStatus { ok, parse_error, runtime_error, timeout };

std::string_view status_name(ExecutionStatus s);
ExecutionStatus parse_status(std::string_view name);

struct TestResult {
  std::string name;
  bool passed = false;
  std::string message;

  bool operator==(const TestResult&) const = default;
};

struct TestReport {
  std::vector<TestResult> results;
  ExecutionStatus execution_status = ExecutionStatus::ok;

  size_t passed() const;
  size_t total() const { return results.size(); }
  bool operator==(const TestReport&) const = default;
};

/// Evaluates every assertion independently against `env`.
TestReport run_assertions(const qlang::Env& env, const std::vector<Assertion>& assertions);

/// Report for a program that never produced an environment: every test
/// fails with `message`.
TestReport failed_report(const std::vector<Assertion>& assertions, ExecutionStatus status, const std::string& message);

}  // namespace qvf::verify
