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

#include <condition_variable>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qvf/candidates/candidate.h"
#include "qvf/sandbox/exec.h"
#include "qvf/sandbox/worker.h"
#include "qvf/synth/task.h"
#include "qvf/verify/report.h"
#include "qvf/verify/reward.h"

namespace qvf::sandbox {

inline constexpr std::string_view kSampleSchema = "sample/1";
inline constexpr std::string_view kRunSchema = "run/1";

/// Routes qlang requests to the in-process executor and pyqiskit requests to
/// a pool of external workers. Thread-safe.
class Sandbox {
 public:
  Sandbox() = default;
  Sandbox(WorkerCommand worker, size_t max_workers);

  ExecResponse execute(const ExecRequest& req);
  std::string executor_id() const;
  bool has_worker() const { return worker_.has_value(); }

 private:
  InProcessExecutor in_process_;
  std::optional<WorkerCommand> worker_;
  std::vector<std::unique_ptr<WorkerExecutor>> workers_;
  std::vector<size_t> idle_;
  std::mutex mu_;
  std::condition_variable cv_;
};

struct VerifiedSample {
  std::string prompt_id;
  std::string candidate_id;
  int candidate_index = 0;
  std::string prompt;
  std::string completion;
  std::string program;
  qlang::Dialect dialect = qlang::Dialect::qlang;
  std::vector<std::string> mutations;
  /// ok, parse_error, runtime_error, timeout or infrastructure_error.
  std::string execution_status = "ok";
  std::vector<verify::TestResult> tests;
  size_t tests_passed = 0;
  size_t tests_total = 0;
  verify::RewardBreakdown rewards;
  std::string generator_id;
  uint64_t seed = 0;
  /// 'A' iff rewards.r_quantum == 1.
  char bucket = 'B';
};

nlohmann::json to_json(const VerifiedSample& s);
VerifiedSample sample_from_json(const nlohmann::json& j);

struct BatchOptions {
  size_t pool_size = 1;
  int64_t timeout_ms = 10000;
  verify::RewardWeights weights;
  verify::FormatRewardMode format_mode = verify::FormatRewardMode::graded;
};

struct BatchFailure {
  std::string candidate_id;
  std::string message;
};

struct BatchResult {
  /// One per candidate, in (task, candidate) order.
  std::vector<VerifiedSample> samples;
  /// Infrastructure failures; their samples are scored 0.
  std::vector<BatchFailure> failures;
};

ExecRequest make_request(const synth::Task& task, const std::string& id, const std::string& program,
                         qlang::Dialect dialect, int64_t timeout_ms);

VerifiedSample score(const synth::Task& task, const candidates::Candidate& candidate, const ExecResponse& response,
                     const BatchOptions& options);

/// Throws std::invalid_argument when the candidate lists do not line up with the tasks.
BatchResult verify_batch(const std::vector<synth::Task>& tasks,
                         const std::vector<std::vector<candidates::Candidate>>& candidates, Sandbox& sandbox,
                         const BatchOptions& options);

/// Re-executes a stored sample against its task and returns r_quantum.
double reverify(const VerifiedSample& sample, const synth::Task& task, Sandbox& sandbox, int64_t timeout_ms = 10000);

struct RunInfo {
  std::string config_hash;
  nlohmann::json seeds = nlohmann::json::object();
  std::string executor_id;
  nlohmann::json template_versions = nlohmann::json::object();
  /// Written to run_timing.json so that run.json stays reproducible.
  std::optional<double> wall_time_s;
};

nlohmann::json template_versions(const std::vector<synth::Task>& tasks);

/// Writes bucket_a.jsonl, bucket_b.jsonl and run.json into `dir`. All files
/// are staged first and renamed into place only after every write succeeded.
/// Returns the manifest.
nlohmann::json write_buckets(const BatchResult& result, const std::filesystem::path& dir, const RunInfo& info);

}  // namespace qvf::sandbox
