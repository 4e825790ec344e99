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

#include "qvf/verify/report.h"

#include <algorithm>
#include <stdexcept>

namespace qvf::verify {

std::string_view status_name(ExecutionStatus s) {
  switch (s) {
    case ExecutionStatus::ok: return "ok";
    case ExecutionStatus::parse_error: return "parse_error";
    case ExecutionStatus::runtime_error: return "runtime_error";
    case ExecutionStatus::timeout: return "timeout";
  }
  return "?";
}

ExecutionStatus parse_status(std::string_view name) {
  for (auto s : {ExecutionStatus::ok, ExecutionStatus::parse_error, ExecutionStatus::runtime_error,
                 ExecutionStatus::timeout}) {
    if (status_name(s) == name) return s;
  }
  throw std::invalid_argument("unknown execution status '" + std::string(name) + "'");
}

size_t TestReport::passed() const {
  return static_cast<size_t>(std::count_if(results.begin(), results.end(), [](const auto& r) { return r.passed; }));
}

TestReport run_assertions(const qlang::Env& env, const std::vector<Assertion>& assertions) {
  TestReport report;
  report.results.reserve(assertions.size());
  for (const auto& a : assertions) {
    auto outcome = evaluate(env, a);
    report.results.push_back({a.name, outcome.passed, std::move(outcome.message)});
  }
  return report;
}

TestReport failed_report(const std::vector<Assertion>& assertions, ExecutionStatus status, const std::string& message) {
  TestReport report;
  report.execution_status = status;
  for (const auto& a : assertions) {
    report.results.push_back({a.name, false, message});
  }
  return report;
}

}  // namespace qvf::verify
