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

// Stand-in for the external worker. Speaks exec/1 on stdin/stdout and runs
// the program as qlang, except for a few "#fake <mode>" directives that
// simulate misbehaving workers.

#include <unistd.h>

#include <chrono>
#include <iostream>
#include <string>
#include <thread>

#include "json.hpp"
#include "qvf/sandbox/exec.h"

using nlohmann::json;
using namespace qvf::sandbox;

int main() {
  std::string line;
  while (std::getline(std::cin, line)) {
    const json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) return 2;
    ExecRequest req;
    try {
      req = exec_request_from_json(j);
    } catch (const ProtocolError& e) {
      if (!j.is_object() || !j.contains("id") || !j["id"].is_string()) return 2;
      ExecResponse r;
      r.id = j["id"].get<std::string>();
      r.status = ExecStatus::error;
      r.error_message = e.what();
      std::cout << to_json(r).dump() << std::endl;
      continue;
    }

    const std::string mode = req.program.rfind("#fake ", 0) == 0 ? req.program.substr(6, req.program.find('\n') - 6) : "";
    if (mode == "hang") {
      for (;;) std::this_thread::sleep_for(std::chrono::hours(1));
    }
    if (mode == "crash") return 1;
    if (mode == "garbage") {
      std::cout << "this is not json" << std::endl;
      continue;
    }
    ExecResponse r;
    if (mode == "pid" || mode == "wrong_id") {
      r.id = mode == "wrong_id" ? req.id + "-other" : req.id;
      r.tests.push_back({"pid", true, std::to_string(::getpid())});
    } else {
      req.dialect = qvf::qlang::Dialect::qlang;
      try {
        r = InProcessExecutor().execute(req);
      } catch (const std::exception& e) {
        r = failed_response(req, ExecStatus::error, e.what());
      }
    }
    std::cout << to_json(r).dump() << std::endl;
  }
  return 0;
}
