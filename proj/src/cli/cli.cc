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

#include "qvf/cli/cli.h"

#include <chrono>
#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qvf/align/embed.h"
#include "qvf/align/objectives.h"
#include "qvf/align/pairs.h"
#include "qvf/candidates/source.h"
#include "qvf/cli/config.h"
#include "qvf/common/hash.h"
#include "qvf/common/io.h"
#include "qvf/common/rng.h"
#include "qvf/evalkit/benchmark.h"
#include "qvf/merge/slerp.h"
#include "qvf/sandbox/batch.h"
#include "qvf/synth/task.h"

namespace qvf::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Unreadable or malformed input files. Exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Generation, execution or output failures. Exit code 3.
class InfraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// State shared by every subcommand: the flag overrides collected while
/// parsing and the inputs read so far.
struct Invocation {
  std::string command;
  std::string config_path;
  json overrides = json::object();
  std::map<std::string, std::string> input_digests;
  RunConfig cfg;
  std::string hash;

  void set(const std::string& pointer, json value) { overrides[json::json_pointer(pointer)] = std::move(value); }

  /// Reads an input file and records its digest under `role`.
  std::string read_input(const std::string& role, const fs::path& path) {
    try {
      std::string bytes = read_file(path);
      input_digests[role] = sha256_hex(bytes);
      return bytes;
    } catch (const IoError& e) {
      throw InputError(e.what());
    }
  }

  std::vector<json> read_jsonl_input(const std::string& role, const fs::path& path) {
    const std::string bytes = read_input(role, path);
    try {
      return parse_jsonl(bytes);
    } catch (const std::exception& e) {
      throw InputError(path.string() + ": " + e.what());
    }
  }

  void resolve() {
    json merged = default_config();
    if (!config_path.empty()) {
      json file;
      try {
        file = json::parse(read_file(config_path));
      } catch (const IoError& e) {
        throw ConfigError("config", e.what());
      } catch (const json::parse_error& e) {
        throw ConfigError("config", config_path + ": " + e.what());
      }
      merge_config(merged, file);
    }
    merge_config(merged, overrides);
    cfg = parse_config(merged);
  }

  void finish_hash() { hash = config_hash(command, cfg.effective, input_digests); }

  json manifest(size_t records) const {
    json cfg_json = cfg.effective;
    cfg_json.erase("pool_size");
    return {{"schema", "manifest/1"},
            {"command", command},
            {"config_hash", hash},
            {"prng_algorithm", kPrngAlgorithm},
            {"records", records},
            {"inputs", input_digests},
            {"config", cfg_json}};
  }
};

void write_output(const fs::path& path, const std::string& contents) {
  try {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_file_atomic(path, contents);
  } catch (const std::exception& e) {
    throw InfraError(e.what());
  }
}

/// Writes `records` as JSONL plus a `<path>.manifest.json` sidecar.
void write_jsonl_artifact(const Invocation& inv, const fs::path& path, const std::vector<json>& records) {
  write_output(path, to_jsonl(records));
  write_output(path.string() + ".manifest.json", inv.manifest(records.size()).dump(2) + "\n");
}

std::vector<synth::Task> parse_tasks(const std::vector<json>& lines) {
  std::vector<synth::Task> tasks;
  tasks.reserve(lines.size());
  for (size_t i = 0; i < lines.size(); ++i) {
    try {
      tasks.push_back(synth::task_from_json(lines[i]));
    } catch (const std::exception& e) {
      throw InputError("task line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  if (tasks.empty()) throw InputError("the task file is empty");
  return tasks;
}

std::unique_ptr<candidates::CandidateSource> make_source(const RunConfig& cfg) {
  if (cfg.generator == "http") return std::make_unique<candidates::HttpSource>(cfg.http);
  return std::make_unique<candidates::MockSource>(cfg.mock);
}

candidates::GenerationRequest make_generation(const RunConfig& cfg, int n) {
  candidates::GenerationRequest req;
  req.n = n;
  req.temperature = cfg.temperature;
  req.max_tokens = cfg.max_tokens;
  req.seed = cfg.seed;
  return req;
}

std::vector<std::vector<candidates::Candidate>> generate(const RunConfig& cfg, const std::vector<synth::Task>& tasks,
                                                         int n) {
  const auto source = make_source(cfg);
  try {
    return candidates::generate_all(*source, tasks, make_generation(cfg, n));
  } catch (const candidates::GenerationError& e) {
    throw InfraError(std::string("generation ") + std::string(candidates::error_kind_name(e.kind())) + " error: " +
                     e.what());
  }
}

std::unique_ptr<sandbox::Sandbox> make_sandbox(const RunConfig& cfg) {
  if (cfg.worker) return std::make_unique<sandbox::Sandbox>(*cfg.worker, cfg.pool_size);
  return std::make_unique<sandbox::Sandbox>();
}

sandbox::BatchOptions batch_options(const RunConfig& cfg) {
  sandbox::BatchOptions opts;
  opts.pool_size = cfg.pool_size;
  opts.timeout_ms = cfg.timeout_ms;
  opts.weights = cfg.weights;
  opts.format_mode = cfg.format_mode;
  return opts;
}

std::string failure_summary(const std::vector<sandbox::BatchFailure>& failures) {
  return std::to_string(failures.size()) + " candidate(s) hit infrastructure failures; first: " +
         failures.front().candidate_id + ": " + failures.front().message;
}

// ---------------------------------------------------------------------------

struct Paths {
  std::string out;
  std::string tasks;
  std::string candidates;
  std::string buckets;
  std::string bench;
  std::string a;
  std::string b;
};

void run_generate(Invocation& inv, const Paths& p, std::ostream& out) {
  const auto families = synth::builtin_families();
  std::vector<const synth::TemplateFamily*> chosen;
  for (const auto& id : inv.cfg.families) {
    const synth::TemplateFamily* found = nullptr;
    for (const auto& f : families) {
      if (f->id() == id) found = f.get();
    }
    if (!found) throw ConfigError("families", "unknown template family '" + id + "'");
    chosen.push_back(found);
  }
  inv.finish_hash();
  const auto tasks = synth::generate_dataset(chosen, inv.cfg.count, inv.cfg.seed);
  std::vector<json> records;
  records.reserve(tasks.size());
  for (const auto& t : tasks) {
    records.push_back(inv.cfg.format == "bench" ? evalkit::to_json(evalkit::bench_from_task(t)) : synth::to_json(t));
  }
  write_jsonl_artifact(inv, p.out, records);
  out << json{{"command", "generate"}, {"records", records.size()}, {"config_hash", inv.hash}}.dump() << "\n";
}

void run_sample(Invocation& inv, const Paths& p, std::ostream& out) {
  const auto tasks = parse_tasks(inv.read_jsonl_input("tasks", p.tasks));
  inv.finish_hash();
  const auto per_task = generate(inv.cfg, tasks, inv.cfg.n);
  std::vector<json> records;
  for (const auto& list : per_task) {
    for (const auto& c : list) records.push_back(candidates::to_json(c));
  }
  write_jsonl_artifact(inv, p.out, records);
  out << json{{"command", "sample"}, {"records", records.size()}, {"config_hash", inv.hash}}.dump() << "\n";
}

int run_verify(Invocation& inv, const Paths& p, std::ostream& out, std::ostream& err) {
  const auto tasks = parse_tasks(inv.read_jsonl_input("tasks", p.tasks));
  const auto lines = inv.read_jsonl_input("candidates", p.candidates);
  inv.finish_hash();

  std::map<std::string, size_t> index_of;
  for (size_t i = 0; i < tasks.size(); ++i) {
    if (!index_of.emplace(tasks[i].task_id, i).second) throw InputError("duplicate task id " + tasks[i].task_id);
  }
  std::vector<std::vector<candidates::Candidate>> grouped(tasks.size());
  for (size_t i = 0; i < lines.size(); ++i) {
    candidates::Candidate c;
    try {
      c = candidates::candidate_from_json(lines[i]);
    } catch (const std::exception& e) {
      throw InputError("candidate line " + std::to_string(i + 1) + ": " + e.what());
    }
    const auto it = index_of.find(c.task_id);
    if (it == index_of.end()) throw InputError("candidate " + c.candidate_id + " names unknown task " + c.task_id);
    grouped[it->second].push_back(std::move(c));
  }

  const auto started = std::chrono::steady_clock::now();
  auto sandbox = make_sandbox(inv.cfg);
  sandbox::BatchResult result;
  try {
    result = sandbox::verify_batch(tasks, grouped, *sandbox, batch_options(inv.cfg));
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  sandbox::RunInfo info;
  info.config_hash = inv.hash;
  info.seeds = {{"seed", inv.cfg.seed}};
  info.executor_id = sandbox->executor_id();
  info.template_versions = sandbox::template_versions(tasks);
  info.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  json manifest;
  try {
    manifest = sandbox::write_buckets(result, p.out, info);
  } catch (const std::exception& e) {
    throw InfraError(e.what());
  }
  out << json{{"command", "verify"}, {"counts", manifest.at("counts")}, {"config_hash", inv.hash}}.dump() << "\n";
  if (!result.failures.empty()) {
    err << json{{"error", "infrastructure"}, {"message", failure_summary(result.failures)}}.dump() << "\n";
    return kExitInfrastructure;
  }
  return kExitOk;
}

std::vector<sandbox::VerifiedSample> read_samples(Invocation& inv, const fs::path& dir) {
  std::vector<sandbox::VerifiedSample> samples;
  for (const char* name : {"bucket_a.jsonl", "bucket_b.jsonl"}) {
    const auto lines = inv.read_jsonl_input(name, dir / name);
    for (size_t i = 0; i < lines.size(); ++i) {
      try {
        samples.push_back(sandbox::sample_from_json(lines[i]));
      } catch (const std::exception& e) {
        throw InputError(std::string(name) + " line " + std::to_string(i + 1) + ": " + e.what());
      }
    }
  }
  return samples;
}

void run_mine_dpo(Invocation& inv, const Paths& p, std::ostream& out) {
  const auto samples = read_samples(inv, p.buckets);
  inv.finish_hash();
  std::unique_ptr<align::Embedder> embedder;
  if (inv.cfg.embedder == "http") {
    embedder = std::make_unique<align::HttpEmbedder>(inv.cfg.embedder_endpoint, inv.cfg.embedder_timeout_ms);
  } else {
    embedder = std::make_unique<align::TrigramEmbedder>();
  }
  align::MiningResult mined;
  try {
    mined = align::mine_pairs(samples, *embedder, inv.cfg.n_per_prompt, inv.cfg.seed);
  } catch (const align::EmbedError& e) {
    throw InfraError(std::string("embedding failed: ") + e.what());
  }
  std::vector<json> records;
  for (const auto& pair : mined.pairs) records.push_back(align::to_json(pair));
  write_jsonl_artifact(inv, p.out, records);
  out << json{{"command", "mine-dpo"},
              {"pairs", mined.stats.pairs},
              {"prompts", mined.stats.prompts},
              {"discarded_no_accepted", mined.stats.discarded_no_accepted},
              {"discarded_no_rejected", mined.stats.discarded_no_rejected},
              {"config_hash", inv.hash}}
             .dump()
      << "\n";
}

int run_grpo_batch(Invocation& inv, const Paths& p, std::ostream& out, std::ostream& err) {
  const auto tasks = parse_tasks(inv.read_jsonl_input("tasks", p.tasks));
  inv.finish_hash();
  const auto per_task = generate(inv.cfg, tasks, static_cast<int>(inv.cfg.group_size));
  auto sandbox = make_sandbox(inv.cfg);
  const auto result = sandbox::verify_batch(tasks, per_task, *sandbox, batch_options(inv.cfg));
  const auto groups = align::grpo_groups(result.samples, inv.cfg.group_size);
  std::vector<json> records;
  for (const auto& g : groups) records.push_back(align::to_json(g));
  write_jsonl_artifact(inv, p.out, records);
  out << json{{"command", "grpo-batch"}, {"groups", groups.size()}, {"config_hash", inv.hash}}.dump() << "\n";
  if (!result.failures.empty()) {
    err << json{{"error", "infrastructure"}, {"message", failure_summary(result.failures)}}.dump() << "\n";
    return kExitInfrastructure;
  }
  return kExitOk;
}

int run_eval(Invocation& inv, const Paths& p, std::ostream& out, std::ostream& err) {
  const auto lines = inv.read_jsonl_input("bench", p.bench);
  std::vector<evalkit::BenchTask> bench;
  for (size_t i = 0; i < lines.size(); ++i) {
    try {
      bench.push_back(evalkit::bench_task_from_json(lines[i]));
    } catch (const std::exception& e) {
      throw InputError("bench line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  if (bench.empty()) throw InputError("the benchmark file is empty");
  inv.finish_hash();

  evalkit::EvalOptions opts;
  opts.n = inv.cfg.n;
  opts.ks = inv.cfg.ks;
  opts.seed = inv.cfg.seed;
  opts.temperature = inv.cfg.temperature;
  opts.max_tokens = inv.cfg.max_tokens;
  opts.pool_size = inv.cfg.pool_size;
  opts.timeout_ms = inv.cfg.timeout_ms;
  opts.bootstrap_resamples = inv.cfg.bootstrap_resamples;
  opts.greedy = inv.cfg.greedy;
  const auto source = make_source(inv.cfg);
  auto sandbox = make_sandbox(inv.cfg);
  evalkit::EvalReport report;
  try {
    report = evalkit::run_benchmark(bench, *source, *sandbox, opts);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("eval", e.what());
  }
  write_output(p.out, to_json(report, inv.hash).dump(2) + "\n");

  size_t flagged = 0;
  for (const auto& r : report.records) flagged += r.flagged ? 1 : 0;
  out << json{{"command", "eval"},
              {"ks", report.ks},
              {"pass_at_k", report.mean_pass_at_k},
              {"flagged", flagged},
              {"config_hash", inv.hash}}
             .dump()
      << "\n";
  if (flagged > 0) {
    err << json{{"error", "infrastructure"}, {"message", std::to_string(flagged) + " task(s) flagged; see the report"}}
               .dump()
        << "\n";
    return kExitInfrastructure;
  }
  return kExitOk;
}

merge::TensorFile read_tensors(Invocation& inv, const std::string& role, const fs::path& path) {
  const std::string bytes = inv.read_input(role, path);
  try {
    return merge::deserialize(bytes);
  } catch (const merge::FormatError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void run_merge(Invocation& inv, const Paths& p, std::ostream& out) {
  const auto a = read_tensors(inv, "a", p.a);
  const auto b = read_tensors(inv, "b", p.b);
  inv.finish_hash();
  merge::MergeResult merged;
  try {
    merged = merge::slerp_merge(a, b, {inv.cfg.t, inv.cfg.parallel_threshold});
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  write_output(p.out, merge::serialize(merged.file));
  json manifest = inv.manifest(merged.file.tensors.size());
  json notes = json::array();
  for (const auto& n : merged.linear_fallbacks) notes.push_back({{"tensor", n.tensor}, {"reason", n.reason}});
  manifest["linear_fallbacks"] = notes;
  write_output(p.out + ".manifest.json", manifest.dump(2) + "\n");
  out << json{{"command", "merge"},
              {"tensors", merged.file.tensors.size()},
              {"linear_fallbacks", notes.size()},
              {"config_hash", inv.hash}}
             .dump()
      << "\n";
}

// ---------------------------------------------------------------------------

template <class T>
void bind(CLI::App* app, Invocation& inv, const std::string& flag, const std::string& pointer, const std::string& help) {
  app->add_option_function<T>(flag, [&inv, pointer](const T& v) { inv.set(pointer, v); }, help);
}

void bind_generator(CLI::App* app, Invocation& inv) {
  bind<std::string>(app, inv, "--generator", "/generator/kind", "mock or http");
  bind<double>(app, inv, "--mutation-rate", "/generator/mutation_rate", "probability that a mock candidate is mutated");
  app->add_option_function<std::vector<std::string>>(
         "--mutations", [&inv](const std::vector<std::string>& v) { inv.set("/generator/mutations", v); },
         "allowed mutation operators (M1..M6)")
      ->delimiter(',');
  bind<std::string>(app, inv, "--endpoint", "/generator/endpoint", "generation server base URL");
  bind<int64_t>(app, inv, "--gen-timeout-ms", "/generator/timeout_ms", "per-request generation timeout");
  bind<int64_t>(app, inv, "--retries", "/generator/retries", "extra generation attempts");
  bind<int64_t>(app, inv, "--max-in-flight", "/generator/max_in_flight", "concurrent generation requests");
  bind<double>(app, inv, "--temperature", "/temperature", "sampling temperature");
  bind<int64_t>(app, inv, "--max-tokens", "/max_tokens", "completion token limit");
}

void bind_sandbox(CLI::App* app, Invocation& inv) {
  bind<int64_t>(app, inv, "--pool-size", "/pool_size", "concurrent executions");
  bind<int64_t>(app, inv, "--timeout-ms", "/timeout_ms", "per-program execution timeout");
  app->add_option_function<std::string>(
      "--worker",
      [&inv](const std::string& cmd) {
        std::istringstream in(cmd);
        std::vector<std::string> argv;
        for (std::string word; in >> word;) argv.push_back(word);
        inv.set("/worker/argv", argv);
      },
      "command line of the exec/1 worker for pyqiskit programs");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Invocation inv;
  Paths p;
  CLI::App app{"Quantum verifiable-feedback pipeline"};
  app.name("qvf");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", inv.config_path, "JSON configuration file; flags override its values");

  auto* gen = app.add_subcommand("generate", "synthesize prompt/test tasks");
  bind<int64_t>(gen, inv, "--count", "/count", "number of tasks");
  bind<int64_t>(gen, inv, "--seed", "/seed", "base seed");
  gen->add_option_function<std::vector<std::string>>(
         "--families", [&inv](const std::vector<std::string>& v) { inv.set("/families", v); }, "template families")
      ->delimiter(',');
  bind<std::string>(gen, inv, "--format", "/format", "task or bench");
  gen->add_option("--out", p.out, "output JSONL")->required();

  auto* sample = app.add_subcommand("sample", "generate candidate completions");
  sample->add_option("--tasks", p.tasks, "task JSONL")->required();
  sample->add_option("--out", p.out, "output JSONL")->required();
  bind<int64_t>(sample, inv, "--n", "/n", "candidates per task");
  bind<int64_t>(sample, inv, "--seed", "/seed", "base seed");
  bind_generator(sample, inv);

  auto* verify = app.add_subcommand("verify", "execute candidates and split them into buckets");
  verify->add_option("--tasks", p.tasks, "task JSONL")->required();
  verify->add_option("--candidates", p.candidates, "candidate JSONL")->required();
  verify->add_option("--out-dir", p.out, "output directory")->required();
  bind<int64_t>(verify, inv, "--seed", "/seed", "base seed");
  bind_sandbox(verify, inv);

  auto* mine = app.add_subcommand("mine-dpo", "mine preference pairs from verified buckets");
  mine->add_option("--buckets", p.buckets, "directory holding bucket_a.jsonl and bucket_b.jsonl")->required();
  mine->add_option("--out", p.out, "output JSONL")->required();
  bind<int64_t>(mine, inv, "--n-per-prompt", "/n_per_prompt", "candidates considered per prompt");
  bind<int64_t>(mine, inv, "--seed", "/seed", "base seed");
  mine->add_option_function<std::string>(
      "--embedder-endpoint",
      [&inv](const std::string& url) {
        inv.set("/embedder/kind", "http");
        inv.set("/embedder/endpoint", url);
      },
      "embedding server base URL; the built-in embedder is used otherwise");

  auto* grpo = app.add_subcommand("grpo-batch", "build GRPO groups with advantages");
  grpo->add_option("--tasks", p.tasks, "task JSONL")->required();
  grpo->add_option("--out", p.out, "output JSONL")->required();
  bind<int64_t>(grpo, inv, "--group-size", "/group_size", "completions per prompt");
  bind<int64_t>(grpo, inv, "--seed", "/seed", "base seed");
  bind_generator(grpo, inv);
  bind_sandbox(grpo, inv);

  auto* eval = app.add_subcommand("eval", "estimate pass@k on a benchmark");
  eval->add_option("--bench", p.bench, "benchmark JSONL")->required();
  eval->add_option("--out", p.out, "report JSON")->required();
  bind<int64_t>(eval, inv, "--n", "/n", "samples per task");
  eval->add_option_function<std::vector<int>>("--k", [&inv](const std::vector<int>& v) { inv.set("/ks", v); },
                                              "k values, repeated or comma separated")
      ->delimiter(',');
  eval->add_flag_function("--greedy", [&inv](std::int64_t) { inv.set("/greedy", true); }, "one greedy sample per task");
  bind<int64_t>(eval, inv, "--bootstrap", "/bootstrap_resamples", "bootstrap resamples for the spread");
  bind<int64_t>(eval, inv, "--seed", "/seed", "base seed");
  bind_generator(eval, inv);
  bind_sandbox(eval, inv);

  auto* mrg = app.add_subcommand("merge", "SLERP-merge two tensor files");
  mrg->add_option("--a", p.a, "first tensor file")->required();
  mrg->add_option("--b", p.b, "second tensor file")->required();
  mrg->add_option("--out", p.out, "merged tensor file")->required();
  bind<double>(mrg, inv, "--t", "/t", "interpolation weight of --b");
  bind<double>(mrg, inv, "--parallel-threshold", "/parallel_threshold", "linear fallback threshold");

  std::vector<const char*> argv{"qvf"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << json{{"error", "usage"}, {"message", e.what()}}.dump() << "\n";
    return kExitConfig;
  }

  try {
    inv.command = app.get_subcommands().front()->get_name();
    inv.resolve();
    if (inv.command == "generate") {
      run_generate(inv, p, out);
    } else if (inv.command == "sample") {
      run_sample(inv, p, out);
    } else if (inv.command == "verify") {
      return run_verify(inv, p, out, err);
    } else if (inv.command == "mine-dpo") {
      run_mine_dpo(inv, p, out);
    } else if (inv.command == "grpo-batch") {
      return run_grpo_batch(inv, p, out, err);
    } else if (inv.command == "eval") {
      return run_eval(inv, p, out, err);
    } else {
      run_merge(inv, p, out);
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << json{{"error", "config"}, {"field", e.field()}, {"message", e.what()}}.dump() << "\n";
    return kExitConfig;
  } catch (const InputError& e) {
    err << json{{"error", "input"}, {"message", e.what()}}.dump() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << json{{"error", "infrastructure"}, {"message", e.what()}}.dump() << "\n";
    return kExitInfrastructure;
  }
}

}  // namespace qvf::cli
