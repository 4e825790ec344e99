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

#include "qvf/sandbox/worker.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

extern char** environ;

namespace qvf::sandbox {

using Clock = std::chrono::steady_clock;

namespace {

void close_fd(int& fd) {
  if (fd >= 0) ::close(fd);
  fd = -1;
}

void write_all(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ExecutorUnavailable(std::string("write to worker failed: ") + std::strerror(errno));
    }
    data.remove_prefix(static_cast<size_t>(n));
  }
}

}  // namespace

WorkerExecutor::WorkerExecutor(WorkerCommand command) : command_(std::move(command)) {
  if (command_.argv.empty()) throw std::invalid_argument("worker command is empty");
  ::signal(SIGPIPE, SIG_IGN);
}

WorkerExecutor::~WorkerExecutor() { stop(); }

void WorkerExecutor::start(int64_t timeout_ms) {
  int in[2];
  int out[2];
  if (::pipe2(in, O_CLOEXEC) != 0) throw ExecutorUnavailable("pipe failed");
  if (::pipe2(out, O_CLOEXEC) != 0) {
    ::close(in[0]);
    ::close(in[1]);
    throw ExecutorUnavailable("pipe failed");
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out[1], STDOUT_FILENO);

  std::vector<std::string> env_storage;
  for (char** e = environ; *e; ++e) {
    if (std::strncmp(*e, "QVF_TIMEOUT_MS=", 15) != 0) env_storage.emplace_back(*e);
  }
  env_storage.push_back("QVF_TIMEOUT_MS=" + std::to_string(timeout_ms));
  std::vector<char*> envp;
  for (auto& s : env_storage) envp.push_back(s.data());
  envp.push_back(nullptr);
  std::vector<char*> argv;
  for (auto& a : command_.argv) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);

  pid_t pid = -1;
  const int rc = ::posix_spawnp(&pid, argv[0], &actions, nullptr, argv.data(), envp.data());
  posix_spawn_file_actions_destroy(&actions);
  ::close(in[0]);
  ::close(out[1]);
  if (rc != 0) {
    ::close(in[1]);
    ::close(out[0]);
    throw ExecutorUnavailable("cannot start worker '" + command_.argv[0] + "': " + std::strerror(rc));
  }
  pid_ = pid;
  to_child_ = in[1];
  from_child_ = out[0];
  buffer_.clear();
  ++spawns_;
}

void WorkerExecutor::stop() {
  close_fd(to_child_);
  close_fd(from_child_);
  if (pid_ > 0) {
    ::kill(pid_, SIGKILL);
    int status = 0;
    while (::waitpid(pid_, &status, 0) < 0 && errno == EINTR) {
    }
  }
  pid_ = -1;
  buffer_.clear();
}

bool WorkerExecutor::read_line(std::string& line, Clock::time_point deadline) {
  for (;;) {
    if (const size_t nl = buffer_.find('\n'); nl != std::string::npos) {
      line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return true;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
    if (left <= 0) return false;
    pollfd p{from_child_, POLLIN, 0};
    const int ready = ::poll(&p, 1, static_cast<int>(std::min<int64_t>(left, 1 << 30)));
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw ExecutorUnavailable(std::string("poll failed: ") + std::strerror(errno));
    }
    if (ready == 0) continue;
    char chunk[4096];
    const ssize_t n = ::read(from_child_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ExecutorUnavailable(std::string("read from worker failed: ") + std::strerror(errno));
    }
    if (n == 0) throw ExecutorUnavailable("worker closed its output");
    buffer_.append(chunk, static_cast<size_t>(n));
  }
}

ExecResponse WorkerExecutor::execute(const ExecRequest& req) {
  if (req.timeout_ms <= 0) throw ProtocolError("exec request: timeout_ms must be positive");
  std::lock_guard lock(mu_);
  if (pid_ < 0) start(req.timeout_ms);

  const auto started = Clock::now();
  const auto deadline = started + std::chrono::milliseconds(req.timeout_ms + command_.grace_ms);
  std::string line;
  try {
    write_all(to_child_, to_json(req).dump() + "\n");
    if (!read_line(line, deadline)) {
      stop();
      ExecResponse r =
          failed_response(req, ExecStatus::timeout, "timed out after " + std::to_string(req.timeout_ms) + " ms");
      r.duration_ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - started).count();
      return r;
    }
  } catch (...) {
    stop();
    throw;
  }

  const nlohmann::json parsed = nlohmann::json::parse(line, nullptr, false);
  if (parsed.is_discarded()) {
    stop();
    throw ProtocolError("worker response is not JSON");
  }
  ExecResponse r;
  try {
    r = exec_response_from_json(parsed);
  } catch (...) {
    stop();
    throw;
  }
  if (r.id != req.id) {
    stop();
    throw ProtocolError("worker answered '" + r.id + "' to request '" + req.id + "'");
  }
  return r;
}

}  // namespace qvf::sandbox
