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

#include "qvf/sandbox/exec.h"

#include <chrono>

#include "qvf/common/deadline.h"
#include "qvf/qlang/interpreter.h"
#include "qvf/verify/report.h"

namespace qvf::sandbox {

using nlohmann::json;

std::string_view exec_status_name(ExecStatus s) {
  switch (s) {
    case ExecStatus::ok: return "ok";
    case ExecStatus::error: return "error";
    case ExecStatus::timeout: return "timeout";
  }
  return "?";
}

ExecStatus parse_exec_status(std::string_view name) {
  if (name == "ok") return ExecStatus::ok;
  if (name == "error") return ExecStatus::error;
  if (name == "timeout") return ExecStatus::timeout;
  throw ProtocolError("unknown exec status '" + std::string(name) + "'");
}

json to_json(const ExecRequest& r) {
  return {{"schema", kExecSchema},
          {"id", r.id},
          {"dialect", qlang::dialect_name(r.dialect)},
          {"program", r.program},
          {"tests", r.tests},
          {"timeout_ms", r.timeout_ms}};
}

ExecRequest exec_request_from_json(const json& j) {
  try {
    if (j.contains("schema") && j["schema"] != kExecSchema) throw ProtocolError("unsupported schema " + j["schema"].dump());
    ExecRequest r;
    r.id = j.at("id").get<std::string>();
    r.dialect = qlang::parse_dialect(j.at("dialect").get<std::string>());
    r.program = j.at("program").get<std::string>();
    r.tests = j.at("tests");
    r.timeout_ms = j.at("timeout_ms").get<int64_t>();
    if (!r.tests.is_array()) throw ProtocolError("exec request: tests must be an array");
    if (r.timeout_ms <= 0) throw ProtocolError("exec request: timeout_ms must be positive");
    return r;
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("exec request: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ProtocolError(std::string("exec request: ") + e.what());
  }
}

json to_json(const ExecResponse& r) {
  json tests = json::array();
  for (const auto& t : r.tests) tests.push_back({{"name", t.name}, {"passed", t.passed}, {"message", t.message}});
  json j = {{"schema", kExecSchema},
            {"id", r.id},
            {"status", exec_status_name(r.status)},
            {"tests", std::move(tests)},
            {"duration_ms", r.duration_ms}};
  if (r.error_kind || r.error_message) {
    j["error"] = {{"kind", r.error_kind.value_or("runtime_error")}, {"message", r.error_message.value_or("")}};
  }
  return j;
}

ExecResponse exec_response_from_json(const json& j) {
  try {
    if (!j.is_object()) throw ProtocolError("exec response is not an object");
    if (j.contains("schema") && j["schema"] != kExecSchema) throw ProtocolError("unsupported schema " + j["schema"].dump());
    ExecResponse r;
    r.id = j.at("id").get<std::string>();
    r.status = parse_exec_status(j.at("status").get<std::string>());
    for (const auto& t : j.at("tests")) {
      r.tests.push_back({t.at("name").get<std::string>(), t.at("passed").get<bool>(), t.value("message", "")});
    }
    r.duration_ms = j.at("duration_ms").get<int64_t>();
    if (auto it = j.find("error"); it != j.end() && it->is_object()) {
      r.error_kind = it->value("kind", "runtime_error");
      r.error_message = it->value("message", "");
    }
    if (r.status != ExecStatus::ok) {
      for (const auto& t : r.tests)
        if (t.passed) throw ProtocolError("exec response: test '" + t.name + "' passed although status is not ok");
    }
    return r;
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("exec response: ") + e.what());
  }
}

std::vector<std::string> test_names(const json& tests) {
  std::vector<std::string> names;
  for (size_t i = 0; i < tests.size(); ++i) {
    const json& t = tests[i];
    if (t.is_object() && t.contains("name") && t["name"].is_string()) {
      names.push_back(t["name"].get<std::string>());
    } else {
      names.push_back("test_" + std::to_string(i));
    }
  }
  return names;
}

ExecResponse failed_response(const ExecRequest& req, ExecStatus status, const std::string& message) {
  ExecResponse r;
  r.id = req.id;
  r.status = status;
  for (auto& name : test_names(req.tests)) r.tests.push_back({std::move(name), false, message});
  return r;
}

namespace {

int64_t elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

ExecResponse InProcessExecutor::execute(const ExecRequest& req) {
  if (req.dialect != qlang::Dialect::qlang)
    throw ExecutorUnavailable("in-process executor only runs the qlang dialect");
  if (req.timeout_ms <= 0) throw ProtocolError("exec request: timeout_ms must be positive");
  std::vector<verify::Assertion> assertions;
  try {
    assertions = verify::assertions_from_json(req.tests);
  } catch (const std::exception& e) {
    throw ProtocolError(std::string("exec request tests: ") + e.what());
  }

  const auto start = std::chrono::steady_clock::now();
  const Deadline deadline = Deadline::after(std::chrono::milliseconds(req.timeout_ms));
  ExecResponse r;
  try {
    const qlang::Env env = qlang::interpret(qlang::parse(req.program), deadline);
    deadline.check();
    const verify::TestReport report = verify::run_assertions(env, assertions);
    r.id = req.id;
    r.status = ExecStatus::ok;
    for (const auto& t : report.results) r.tests.push_back({t.name, t.passed, t.message});
  } catch (const TimeoutError&) {
    r = failed_response(req, ExecStatus::timeout, "timed out after " + std::to_string(req.timeout_ms) + " ms");
  } catch (const qlang::ParseError& e) {
    r = failed_response(req, ExecStatus::error, e.what());
    r.error_kind = "parse_error";
    r.error_message = e.what();
  } catch (const std::exception& e) {
    r = failed_response(req, ExecStatus::error, e.what());
    r.error_kind = "runtime_error";
    r.error_message = e.what();
  }
  r.duration_ms = elapsed_ms(start);
  return r;
}

}  // namespace qvf::sandbox
