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

#include <sys/types.h>

#include <chrono>
#include <mutex>
#include <string>
#include <vector>

#include "qvf/sandbox/exec.h"

namespace qvf::sandbox {

struct WorkerCommand {
  std::vector<std::string> argv;
  /// Extra time granted on top of a request's timeout before the worker is killed.
  int64_t grace_ms = 200;
};

/// One external worker process speaking exec/1 over its stdin/stdout.
/// Started lazily; killed and restarted after a timeout or protocol fault.
/// Handles one request at a time. Ignores SIGPIPE process-wide so that a
/// dead worker surfaces as an error instead of a signal.
class WorkerExecutor : public Executor {
 public:
  explicit WorkerExecutor(WorkerCommand command);
  ~WorkerExecutor() override;
  WorkerExecutor(const WorkerExecutor&) = delete;
  WorkerExecutor& operator=(const WorkerExecutor&) = delete;

  std::string id() const override { return "worker-exec/1"; }
  ExecResponse execute(const ExecRequest& req) override;

  /// Number of processes started so far.
  int spawn_count() const { return spawns_; }
  pid_t pid() const { return pid_; }

 private:
  void start(int64_t timeout_ms);
  void stop();
  /// Reads one line before `deadline`; false on timeout. Throws on EOF.
  bool read_line(std::string& line, std::chrono::steady_clock::time_point deadline);

  WorkerCommand command_;
  std::mutex mu_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  int spawns_ = 0;
};

}  // namespace qvf::sandbox
