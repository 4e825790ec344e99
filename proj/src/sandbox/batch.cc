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

#include "qvf/sandbox/batch.h"

#include <atomic>
#include <fstream>
#include <thread>

#include "qvf/common/io.h"
#include "qvf/common/rng.h"

namespace qvf::sandbox {

using nlohmann::json;
namespace fs = std::filesystem;

Sandbox::Sandbox(WorkerCommand worker, size_t max_workers) : worker_(std::move(worker)) {
  if (max_workers < 1) throw std::invalid_argument("sandbox needs at least one worker slot");
  for (size_t i = 0; i < max_workers; ++i) {
    workers_.push_back(std::make_unique<WorkerExecutor>(*worker_));
    idle_.push_back(i);
  }
}

std::string Sandbox::executor_id() const {
  std::string id = in_process_.id();
  if (worker_) id += "+" + workers_.front()->id();
  return id;
}

ExecResponse Sandbox::execute(const ExecRequest& req) {
  if (req.dialect == qlang::Dialect::qlang) return in_process_.execute(req);
  if (!worker_) {
    throw ExecutorUnavailable("no worker configured for dialect " + std::string(qlang::dialect_name(req.dialect)));
  }
  size_t slot;
  {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return !idle_.empty(); });
    slot = idle_.back();
    idle_.pop_back();
  }
  struct Release {
    Sandbox& s;
    size_t slot;
    ~Release() {
      {
        std::lock_guard lock(s.mu_);
        s.idle_.push_back(slot);
      }
      s.cv_.notify_one();
    }
  } release{*this, slot};
  return workers_[slot]->execute(req);
}

json to_json(const VerifiedSample& s) {
  json tests = json::array();
  for (const auto& t : s.tests) tests.push_back({{"name", t.name}, {"passed", t.passed}, {"message", t.message}});
  return {{"schema", kSampleSchema},
          {"prompt_id", s.prompt_id},
          {"candidate_id", s.candidate_id},
          {"candidate_index", s.candidate_index},
          {"prompt", s.prompt},
          {"completion", s.completion},
          {"program", s.program},
          {"dialect", qlang::dialect_name(s.dialect)},
          {"mutations", s.mutations},
          {"execution_status", s.execution_status},
          {"tests", std::move(tests)},
          {"tests_passed", s.tests_passed},
          {"tests_total", s.tests_total},
          {"rewards", {{"r_quantum", s.rewards.r_quantum}, {"r_format", s.rewards.r_format}, {"total", s.rewards.total}}},
          {"generator_id", s.generator_id},
          {"seed", s.seed},
          {"bucket", std::string(1, s.bucket)}};
}

VerifiedSample sample_from_json(const json& j) {
  try {
    if (j.at("schema").get<std::string>() != kSampleSchema)
      throw std::invalid_argument("sample: unsupported schema " + j.at("schema").dump());
    VerifiedSample s;
    s.prompt_id = j.at("prompt_id").get<std::string>();
    s.candidate_id = j.at("candidate_id").get<std::string>();
    s.candidate_index = j.at("candidate_index").get<int>();
    s.prompt = j.at("prompt").get<std::string>();
    s.completion = j.at("completion").get<std::string>();
    s.program = j.at("program").get<std::string>();
    s.dialect = qlang::parse_dialect(j.at("dialect").get<std::string>());
    s.mutations = j.at("mutations").get<std::vector<std::string>>();
    s.execution_status = j.at("execution_status").get<std::string>();
    for (const auto& t : j.at("tests"))
      s.tests.push_back({t.at("name").get<std::string>(), t.at("passed").get<bool>(), t.at("message").get<std::string>()});
    s.tests_passed = j.at("tests_passed").get<size_t>();
    s.tests_total = j.at("tests_total").get<size_t>();
    const json& r = j.at("rewards");
    s.rewards = {r.at("r_quantum").get<double>(), r.at("r_format").get<double>(), r.at("total").get<double>()};
    s.generator_id = j.at("generator_id").get<std::string>();
    s.seed = j.at("seed").get<uint64_t>();
    const std::string bucket = j.at("bucket").get<std::string>();
    if (bucket != "A" && bucket != "B") throw std::invalid_argument("sample: bucket must be A or B");
    s.bucket = bucket[0];
    if ((s.bucket == 'A') != (s.rewards.r_quantum == 1.0))
      throw std::invalid_argument("sample " + s.candidate_id + ": bucket disagrees with r_quantum");
    return s;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("sample: ") + e.what());
  }
}

ExecRequest make_request(const synth::Task& task, const std::string& id, const std::string& program,
                         qlang::Dialect dialect, int64_t timeout_ms) {
  ExecRequest req;
  req.id = id;
  req.dialect = dialect;
  req.program = program;
  req.tests = synth::exec_tests(task);
  req.timeout_ms = timeout_ms;
  return req;
}

namespace {

std::string status_of(const ExecResponse& r) {
  switch (r.status) {
    case ExecStatus::ok: return "ok";
    case ExecStatus::timeout: return "timeout";
    case ExecStatus::error: return r.error_kind == "parse_error" ? "parse_error" : "runtime_error";
  }
  return "runtime_error";
}

verify::TestReport report_of(const ExecResponse& r) {
  verify::TestReport report;
  report.execution_status = verify::parse_status(status_of(r));
  for (const auto& t : r.tests) report.results.push_back({t.name, t.passed, t.message});
  return report;
}

}  // namespace

VerifiedSample score(const synth::Task& task, const candidates::Candidate& candidate, const ExecResponse& response,
                     const BatchOptions& options) {
  VerifiedSample s;
  s.prompt_id = task.task_id;
  s.candidate_id = candidate.candidate_id;
  s.candidate_index = candidate.index;
  s.prompt = task.prompt;
  s.completion = candidate.completion;
  s.program = candidate.program;
  s.dialect = candidate.dialect;
  for (auto op : candidate.mutations) s.mutations.emplace_back(candidates::mutation_code(op));
  s.generator_id = candidate.generator_id;
  s.seed = candidate.seed;

  const verify::TestReport report = report_of(response);
  s.execution_status = status_of(response);
  s.tests = report.results;
  s.tests_passed = report.passed();
  s.tests_total = report.total();
  const double r_q = verify::quantum_reward(report);
  const double r_f = verify::format_reward(candidate.completion, options.format_mode);
  s.rewards = verify::total_reward(r_q, r_f, options.weights);
  s.bucket = r_q == 1.0 ? 'A' : 'B';
  return s;
}

BatchResult verify_batch(const std::vector<synth::Task>& tasks,
                         const std::vector<std::vector<candidates::Candidate>>& candidates, Sandbox& sandbox,
                         const BatchOptions& options) {
  if (options.pool_size < 1) throw std::invalid_argument("pool_size must be at least 1");
  if (options.timeout_ms <= 0) throw std::invalid_argument("timeout_ms must be positive");
  if (tasks.size() != candidates.size())
    throw std::invalid_argument("verify_batch: " + std::to_string(tasks.size()) + " tasks but " +
                                std::to_string(candidates.size()) + " candidate lists");

  struct Job {
    size_t task;
    size_t candidate;
  };
  std::vector<Job> jobs;
  for (size_t t = 0; t < tasks.size(); ++t) {
    for (size_t c = 0; c < candidates[t].size(); ++c) {
      if (candidates[t][c].task_id != tasks[t].task_id)
        throw std::invalid_argument("candidate " + candidates[t][c].candidate_id + " does not belong to task " +
                                    tasks[t].task_id);
      jobs.push_back({t, c});
    }
  }

  std::vector<VerifiedSample> samples(jobs.size());
  std::vector<std::optional<std::string>> failures(jobs.size());
  std::vector<json> test_lists(tasks.size());
  for (size_t t = 0; t < tasks.size(); ++t) test_lists[t] = synth::exec_tests(tasks[t]);

  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next++; i < jobs.size(); i = next++) {
      const synth::Task& task = tasks[jobs[i].task];
      const candidates::Candidate& cand = candidates[jobs[i].task][jobs[i].candidate];
      ExecRequest req;
      req.id = cand.candidate_id;
      req.dialect = cand.dialect;
      req.program = cand.program;
      req.tests = test_lists[jobs[i].task];
      req.timeout_ms = options.timeout_ms;
      ExecResponse resp;
      bool infrastructure = false;
      if (cand.unparseable) {
        resp = failed_response(req, ExecStatus::error, "no program source in completion");
        resp.error_kind = "parse_error";
      } else {
        try {
          resp = sandbox.execute(req);
        } catch (const std::exception& e) {
          failures[i] = e.what();
          resp = failed_response(req, ExecStatus::error, e.what());
          infrastructure = true;
        }
      }
      samples[i] = score(task, cand, resp, options);
      if (infrastructure) samples[i].execution_status = "infrastructure_error";
    }
  };

  const size_t workers = std::min(options.pool_size, std::max<size_t>(jobs.size(), 1));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    for (size_t w = 0; w < workers; ++w) threads.emplace_back(work);
    for (auto& t : threads) t.join();
  }

  BatchResult result;
  result.samples = std::move(samples);
  for (size_t i = 0; i < jobs.size(); ++i)
    if (failures[i]) result.failures.push_back({result.samples[i].candidate_id, *failures[i]});
  return result;
}

double reverify(const VerifiedSample& sample, const synth::Task& task, Sandbox& sandbox, int64_t timeout_ms) {
  if (sample.program.empty()) return 0.0;
  const ExecResponse resp = sandbox.execute(make_request(task, sample.candidate_id, sample.program, sample.dialect,
                                                         timeout_ms));
  return verify::quantum_reward(report_of(resp));
}

json template_versions(const std::vector<synth::Task>& tasks) {
  json out = json::object();
  for (const auto& t : tasks) out[t.template_id] = t.template_version;
  return out;
}

namespace {

void stage(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) throw IoError("cannot write " + path.string());
}

}  // namespace

json write_buckets(const BatchResult& result, const fs::path& dir, const RunInfo& info) {
  std::vector<json> a;
  std::vector<json> b;
  for (const auto& s : result.samples) (s.bucket == 'A' ? a : b).push_back(to_json(s));

  json failures = json::array();
  for (const auto& f : result.failures) failures.push_back({{"candidate_id", f.candidate_id}, {"message", f.message}});
  json manifest = {{"schema", kRunSchema},
                   {"config_hash", info.config_hash},
                   {"prng_algorithm", kPrngAlgorithm},
                   {"seeds", info.seeds},
                   {"counts",
                    {{"bucket_a", a.size()},
                     {"bucket_b", b.size()},
                     {"total", result.samples.size()},
                     {"failures", result.failures.size()}}},
                   {"executor_id", info.executor_id},
                   {"template_versions", info.template_versions},
                   {"failures", std::move(failures)}};

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  const std::vector<std::pair<std::string, std::string>> files = {
      {"bucket_a.jsonl", to_jsonl(a)}, {"bucket_b.jsonl", to_jsonl(b)}, {"run.json", manifest.dump(2) + "\n"}};
  std::vector<fs::path> staged;
  try {
    for (const auto& [name, contents] : files) {
      staged.push_back(dir / ("." + name + ".tmp"));
      stage(staged.back(), contents);
    }
  } catch (...) {
    for (const auto& p : staged) fs::remove(p, ec);
    throw;
  }
  for (size_t i = 0; i < files.size(); ++i) {
    fs::rename(staged[i], dir / files[i].first, ec);
    if (ec) throw IoError("cannot move " + staged[i].string() + " into place: " + ec.message());
  }
  if (info.wall_time_s) {
    write_file_atomic(dir / "run_timing.json", json{{"wall_time_s", *info.wall_time_s}}.dump(2) + "\n");
  }
  return manifest;
}

}  // namespace qvf::sandbox
