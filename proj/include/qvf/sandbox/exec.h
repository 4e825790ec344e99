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
#include <vector>

#include "json.hpp"
#include "qvf/qlang/program.h"

namespace qvf::sandbox {

inline constexpr std::string_view kExecSchema = "exec/1";

enum class ExecStatus { ok, error, timeout };

std::string_view exec_status_name(ExecStatus s);
ExecStatus parse_exec_status(std::string_view name);

/// Malformed or mismatched exec/1 message.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The executor could not run the request at all (no worker, worker died).
class ExecutorUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExecRequest {
  std::string id;
  qlang::Dialect dialect = qlang::Dialect::qlang;
  std::string program;
  /// Array of test objects, each with a "name". Assertion JSON for qlang,
  /// opaque test payloads for pyqiskit.
  nlohmann::json tests = nlohmann::json::array();
  int64_t timeout_ms = 10000;
};

struct ExecTest {
  std::string name;
  bool passed = false;
  std::string message;
  bool operator==(const ExecTest&) const = default;
};

struct ExecResponse {
  std::string id;
  ExecStatus status = ExecStatus::ok;
  std::vector<ExecTest> tests;
  int64_t duration_ms = 0;
  /// Optional detail for status=error: kind is "parse_error" or "runtime_error".
  std::optional<std::string> error_kind;
  std::optional<std::string> error_message;
};

nlohmann::json to_json(const ExecRequest& r);
ExecRequest exec_request_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExecResponse& r);
/// Enforces the invariants: status != ok means every test failed.
ExecResponse exec_response_from_json(const nlohmann::json& j);

/// Test names from a request's test list, "test_<i>" where a name is missing.
std::vector<std::string> test_names(const nlohmann::json& tests);

/// Response with every named test failed.
ExecResponse failed_response(const ExecRequest& req, ExecStatus status, const std::string& message);

class Executor {
 public:
  virtual ~Executor() = default;
  virtual std::string id() const = 0;
  /// Candidate failures are reported in the response. Throws
  /// ExecutorUnavailable or ProtocolError for infrastructure failures.
  virtual ExecResponse execute(const ExecRequest& req) = 0;
};

/// parse, interpret and run the assertions in this process under a cooperative deadline.
class InProcessExecutor : public Executor {
 public:
  std::string id() const override { return "inprocess-qlang/1"; }
  ExecResponse execute(const ExecRequest& req) override;
};

}  // namespace qvf::sandbox
