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

#include "qvf/evalkit/benchmark.h"

#include <cmath>
#include <map>

#include "qvf/common/hash.h"
#include "qvf/common/io.h"
#include "qvf/common/rng.h"
#include "qvf/evalkit/pass_at_k.h"

namespace qvf::evalkit {

using nlohmann::json;

json to_json(const BenchTask& t) {
  json j = {{"schema", kBenchSchema},
            {"task_id", t.task_id},
            {"prompt", t.prompt},
            {"dialect", qlang::dialect_name(t.dialect)},
            {"tests", t.tests}};
  if (t.reference) j["reference"] = *t.reference;
  return j;
}

BenchTask bench_task_from_json(const json& j) {
  try {
    if (j.contains("schema") && j["schema"] != kBenchSchema)
      throw std::invalid_argument("bench: unsupported schema " + j["schema"].dump());
    BenchTask t;
    t.task_id = j.at("task_id").get<std::string>();
    t.prompt = j.at("prompt").get<std::string>();
    t.dialect = qlang::parse_dialect(j.at("dialect").get<std::string>());
    t.tests = j.at("tests");
    if (!t.tests.is_array() || t.tests.empty())
      throw std::invalid_argument("bench task " + t.task_id + ": tests must be a non-empty array");
    if (auto it = j.find("reference"); it != j.end() && !it->is_null()) t.reference = it->get<std::string>();
    return t;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bench: ") + e.what());
  }
}

std::vector<BenchTask> read_bench(const std::filesystem::path& path) {
  std::vector<BenchTask> out;
  for (const auto& j : read_jsonl(path)) out.push_back(bench_task_from_json(j));
  return out;
}

BenchTask bench_from_task(const synth::Task& t) {
  return {t.task_id, t.prompt, t.reference.dialect, synth::exec_tests(t), t.reference.source};
}

synth::Task task_from_bench(const BenchTask& b) {
  synth::Task t;
  t.task_id = b.task_id;
  t.prompt = b.prompt;
  t.template_id = "bench";
  const std::string source = b.reference.value_or("");
  if (b.dialect == qlang::Dialect::qlang) {
    try {
      t.reference = b.reference ? qlang::parse(source) : qlang::Program{};
      t.assertions = verify::assertions_from_json(b.tests);
    } catch (const std::exception& e) {
      throw std::invalid_argument("bench task " + b.task_id + ": " + e.what());
    }
  } else {
    t.reference = qlang::Program{b.dialect, source, {}};
    t.raw_tests = b.tests;
  }
  return t;
}

std::vector<double> mean_pass_at_k(const std::vector<EvalRecord>& records, const std::vector<int>& ks) {
  std::vector<double> out;
  for (int k : ks) {
    double sum = 0.0;
    for (const auto& r : records) sum += pass_at_k(r.n, r.c, k);
    out.push_back(records.empty() ? 0.0 : sum / static_cast<double>(records.size()));
  }
  return out;
}

EvalReport run_benchmark(const std::vector<BenchTask>& bench, const candidates::CandidateSource& source,
                         sandbox::Sandbox& sandbox, EvalOptions options) {
  if (options.greedy) {
    options.n = 1;
    options.temperature = 0.0;
    options.ks = {1};
  }
  if (bench.empty()) throw std::invalid_argument("benchmark has no tasks");
  if (options.ks.empty()) throw std::invalid_argument("no k values requested");
  for (int k : options.ks)
    if (k < 1 || k > options.n)
      throw std::invalid_argument("k=" + std::to_string(k) + " is outside 1.." + std::to_string(options.n));

  std::vector<synth::Task> tasks;
  for (const auto& b : bench) tasks.push_back(task_from_bench(b));

  candidates::GenerationRequest req;
  req.n = options.n;
  req.temperature = options.temperature;
  req.max_tokens = options.max_tokens;
  req.seed = options.seed;
  const auto outcomes = candidates::generate_each(source, tasks, req);
  std::vector<std::vector<candidates::Candidate>> cands;
  for (const auto& o : outcomes) cands.push_back(o.candidates);
  const sandbox::BatchResult batch = sandbox::verify_batch(tasks, cands, sandbox, {options.pool_size, options.timeout_ms});

  std::map<std::string, size_t> infra;
  for (const auto& f : batch.failures) {
    for (size_t t = 0; t < tasks.size(); ++t) {
      if (f.candidate_id.rfind(tasks[t].task_id + "/", 0) == 0) ++infra[tasks[t].task_id];
    }
  }

  EvalReport report;
  report.options = options;
  report.ks = options.ks;
  report.generator_id = source.id();
  report.executor_id = sandbox.executor_id();
  size_t at = 0;
  for (size_t t = 0; t < tasks.size(); ++t) {
    EvalRecord r{tasks[t].task_id, options.n, 0, false, ""};
    for (size_t i = 0; i < cands[t].size(); ++i, ++at) r.c += batch.samples[at].rewards.r_quantum == 1.0;
    if (outcomes[t].error) {
      r.flagged = true;
      r.note = "generation failed: " + *outcomes[t].error;
    } else if (auto it = infra.find(r.task_id); it != infra.end()) {
      r.flagged = true;
      r.note = std::to_string(it->second) + " candidates hit sandbox failures";
    }
    report.records.push_back(std::move(r));
  }
  report.mean_pass_at_k = mean_pass_at_k(report.records, report.ks);

  std::vector<std::vector<double>> per_task(report.records.size());
  for (size_t t = 0; t < report.records.size(); ++t)
    for (int k : report.ks) per_task[t].push_back(pass_at_k(report.records[t].n, report.records[t].c, k));
  Rng rng(derive_seed(options.seed, fnv1a64("bootstrap")));
  std::vector<double> sum(report.ks.size(), 0.0);
  std::vector<double> sum_sq(report.ks.size(), 0.0);
  const size_t m = per_task.size();
  for (size_t b = 0; b < options.bootstrap_resamples; ++b) {
    std::vector<double> mean(report.ks.size(), 0.0);
    for (size_t draw = 0; draw < m; ++draw) {
      const auto& row = per_task[rng.below(m)];
      for (size_t k = 0; k < row.size(); ++k) mean[k] += row[k];
    }
    for (size_t k = 0; k < mean.size(); ++k) {
      mean[k] /= static_cast<double>(m);
      sum[k] += mean[k];
      sum_sq[k] += mean[k] * mean[k];
    }
  }
  for (size_t k = 0; k < report.ks.size(); ++k) {
    if (options.bootstrap_resamples == 0) {
      report.bootstrap_sigma.push_back(0.0);
      continue;
    }
    const double r = static_cast<double>(options.bootstrap_resamples);
    const double mu = sum[k] / r;
    report.bootstrap_sigma.push_back(std::sqrt(std::max(0.0, sum_sq[k] / r - mu * mu)));
  }
  return report;
}

json to_json(const EvalReport& r, const std::string& config_hash) {
  json means = json::object();
  json sigmas = json::object();
  for (size_t i = 0; i < r.ks.size(); ++i) {
    means[std::to_string(r.ks[i])] = r.mean_pass_at_k[i];
    sigmas[std::to_string(r.ks[i])] = r.bootstrap_sigma[i];
  }
  json records = json::array();
  size_t flagged = 0;
  for (const auto& rec : r.records) {
    flagged += rec.flagged;
    json j = {{"task_id", rec.task_id}, {"n", rec.n}, {"c", rec.c}, {"flagged", rec.flagged}};
    if (!rec.note.empty()) j["note"] = rec.note;
    records.push_back(std::move(j));
  }
  return {{"schema", kReportSchema},
          {"config_hash", config_hash},
          {"prng_algorithm", kPrngAlgorithm},
          {"generator_id", r.generator_id},
          {"executor_id", r.executor_id},
          {"decoding",
           {{"n", r.options.n},
            {"temperature", r.options.temperature},
            {"top_p", r.options.top_p},
            {"max_tokens", r.options.max_tokens},
            {"seed", r.options.seed},
            {"greedy", r.options.greedy}}},
          {"ks", r.ks},
          {"pass_at_k", std::move(means)},
          {"bootstrap_sigma", std::move(sigmas)},
          {"bootstrap_resamples", r.options.bootstrap_resamples},
          {"tasks", r.records.size()},
          {"flagged", flagged},
          {"records", std::move(records)}};
}

}  // namespace qvf::evalkit
