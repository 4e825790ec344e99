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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qvf/candidates/source.h"
#include "qvf/sandbox/batch.h"
#include "qvf/synth/task.h"

namespace qvf::evalkit {

inline constexpr std::string_view kBenchSchema = "bench/1";
inline constexpr std::string_view kReportSchema = "eval/1";

struct BenchTask {
  std::string task_id;
  std::string prompt;
  qlang::Dialect dialect = qlang::Dialect::qlang;
  /// Assertion JSON for qlang, opaque test payloads for pyqiskit.
  nlohmann::json tests = nlohmann::json::array();
  /// Reference solution; needed only by the mock generator.
  std::optional<std::string> reference;
};

nlohmann::json to_json(const BenchTask& t);
BenchTask bench_task_from_json(const nlohmann::json& j);
std::vector<BenchTask> read_bench(const std::filesystem::path& path);

/// Bench record from a synthesized task, reference included.
BenchTask bench_from_task(const synth::Task& t);
/// Task view of a bench record, for generation and execution.
synth::Task task_from_bench(const BenchTask& b);

struct EvalOptions {
  int n = 16;
  std::vector<int> ks{1};
  uint64_t seed = 0;
  double temperature = 1.0;
  double top_p = 1.0;
  int max_tokens = 1024;
  size_t pool_size = 1;
  int64_t timeout_ms = 10000;
  size_t bootstrap_resamples = 1000;
  /// n = 1, temperature 0, ks = {1}.
  bool greedy = false;
};

struct EvalRecord {
  std::string task_id;
  int n = 0;
  int c = 0;
  bool flagged = false;
  std::string note;
};

struct EvalReport {
  std::vector<int> ks;
  std::vector<double> mean_pass_at_k;
  std::vector<double> bootstrap_sigma;
  std::vector<EvalRecord> records;
  EvalOptions options;
  std::string generator_id;
  std::string executor_id;
};

nlohmann::json to_json(const EvalReport& r, const std::string& config_hash);

/// Per-task pass@k means plus a bootstrap over tasks. Generation and
/// sandbox failures count as failed candidates and flag the task.
EvalReport run_benchmark(const std::vector<BenchTask>& bench, const candidates::CandidateSource& source,
                         sandbox::Sandbox& sandbox, EvalOptions options);

/// Mean pass@k over records, for each k.
std::vector<double> mean_pass_at_k(const std::vector<EvalRecord>& records, const std::vector<int>& ks);

}  // namespace qvf::evalkit
