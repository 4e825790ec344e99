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

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

#include "gtest/gtest.h"
#include "json.hpp"
#include "qvf/cli/cli.h"
#include "qvf/cli/config.h"
#include "qvf/common/io.h"
#include "qvf/merge/tensor_file.h"
#include "qvf/synth/task.h"

namespace fs = std::filesystem;
using nlohmann::json;
using qvf::cli::run_cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome qvf_run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("qvf_cli_" + std::string(info->name()) + "_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

/// C(n, k) as a double via exact integer products; fine for n <= 60.
double choose(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

json error_of(const Outcome& o) { return json::parse(o.err.substr(0, o.err.find('\n'))); }

}  // namespace

TEST_F(CliTest, GenerateCount200Seed7) {
  const auto r = qvf_run({"generate", "--count", "200", "--seed", "7", "--out", path("tasks.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = qvf::read_jsonl(path("tasks.jsonl"));
  ASSERT_EQ(lines.size(), 200u);
  std::set<std::string> ids;
  for (const auto& j : lines) {
    const auto task = qvf::synth::task_from_json(j);
    EXPECT_NO_THROW(qvf::synth::check_self_consistency(task)) << task.task_id;
    ids.insert(task.task_id);
  }
  EXPECT_EQ(ids.size(), 200u);

  const auto manifest = json::parse(qvf::read_file(path("tasks.jsonl.manifest.json")));
  EXPECT_EQ(manifest["records"], 200);
  EXPECT_EQ(manifest["prng_algorithm"], "mt19937_64");
  EXPECT_EQ(manifest["config_hash"].get<std::string>().size(), 64u);
  EXPECT_EQ(json::parse(r.out)["config_hash"], manifest["config_hash"]);
}

TEST_F(CliTest, FullChainIsByteIdenticalAcrossReruns) {
  auto chain = [&](const std::string& tag, const std::string& pool) {
    const auto d = [&](const std::string& f) { return path(tag + "/" + f); };
    fs::create_directories(dir_ / tag);
    EXPECT_EQ(qvf_run({"generate", "--count", "24", "--seed", "11", "--out", d("tasks.jsonl")}).code, 0);
    EXPECT_EQ(qvf_run({"sample", "--tasks", d("tasks.jsonl"), "--n", "8", "--seed", "11", "--out", d("c.jsonl")}).code,
              0);
    EXPECT_EQ(qvf_run({"verify", "--tasks", d("tasks.jsonl"), "--candidates", d("c.jsonl"), "--out-dir", d("run"),
                       "--pool-size", pool})
                  .code,
              0);
    EXPECT_EQ(qvf_run({"mine-dpo", "--buckets", d("run"), "--out", d("pairs.jsonl"), "--n-per-prompt", "8"}).code, 0);
  };
  chain("one", "1");
  chain("two", "4");
  size_t compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir_ / "one")) {
    if (!entry.is_regular_file() || entry.path().filename() == "run_timing.json") continue;
    const auto twin = dir_ / "two" / fs::relative(entry.path(), dir_ / "one");
    EXPECT_EQ(qvf::read_file(entry.path()), qvf::read_file(twin)) << entry.path();
    ++compared;
  }
  EXPECT_EQ(compared, 9u);
  EXPECT_FALSE(qvf::read_jsonl(path("one/pairs.jsonl")).empty());
}

TEST_F(CliTest, EvalReportsMonotonePassAtK) {
  ASSERT_EQ(qvf_run({"generate", "--count", "12", "--seed", "5", "--format", "bench", "--out", path("bench.jsonl")}).code,
            0);
  const auto r = qvf_run({"eval", "--bench", path("bench.jsonl"), "--n", "16", "--k", "1,4", "--k", "8", "--out",
                          path("report.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = json::parse(qvf::read_file(path("report.json")));
  EXPECT_EQ(report["config_hash"].get<std::string>().size(), 64u);
  const auto means = json::parse(r.out)["pass_at_k"].get<std::vector<double>>();
  ASSERT_EQ(means.size(), 3u);
  EXPECT_LE(means[0], means[1]);
  EXPECT_LE(means[1], means[2]);

  // Recompute each mean from the per-task counts as 1 - C(n-c,k)/C(n,k).
  const int ks[] = {1, 4, 8};
  const auto out = json::parse(r.out);
  std::vector<std::pair<int, int>> counts;
  for (const auto& rec : report["records"]) counts.emplace_back(rec["n"].get<int>(), rec["c"].get<int>());
  ASSERT_EQ(counts.size(), 12u);
  for (size_t i = 0; i < 3; ++i) {
    double sum = 0.0;
    for (auto [n, c] : counts) sum += 1.0 - choose(n - c, ks[i]) / choose(n, ks[i]);
    EXPECT_NEAR(means[i], sum / counts.size(), 1e-12);
  }
  EXPECT_EQ(out["ks"], json({1, 4, 8}));
}

TEST_F(CliTest, FlagsOverrideConfigFile) {
  const auto cfg = path("cfg.json");
  qvf::write_file_atomic(cfg, R"({"count": 5, "seed": 3, "families": ["T1"]})");
  ASSERT_EQ(qvf_run({"--config", cfg, "generate", "--out", path("a.jsonl")}).code, 0);
  ASSERT_EQ(qvf_run({"generate", "--config", cfg, "--count", "3", "--out", path("b.jsonl")}).code, 0);
  const auto a = qvf::read_jsonl(path("a.jsonl"));
  const auto b = qvf::read_jsonl(path("b.jsonl"));
  ASSERT_EQ(a.size(), 5u);
  ASSERT_EQ(b.size(), 3u);
  for (const auto& j : a) EXPECT_EQ(j["template_id"], "T1");
  // Same seed and family: the shorter run is a prefix of the longer one.
  for (size_t i = 0; i < b.size(); ++i) EXPECT_EQ(a[i], b[i]);
  const auto manifest = json::parse(qvf::read_file(path("b.jsonl.manifest.json")));
  EXPECT_EQ(manifest["config"]["count"], 3);
  EXPECT_EQ(manifest["config"]["seed"], 3);
}

TEST_F(CliTest, ConfigHashTracksOutputRelevantSettingsOnly) {
  const json base = qvf::cli::default_config();
  const std::map<std::string, std::string> inputs{{"tasks", "abc"}};
  json pooled = base;
  pooled["pool_size"] = 8;
  json reseeded = base;
  reseeded["seed"] = 1;
  const auto h = qvf::cli::config_hash("verify", base, inputs);
  EXPECT_EQ(h, qvf::cli::config_hash("verify", pooled, inputs));
  EXPECT_NE(h, qvf::cli::config_hash("verify", reseeded, inputs));
  EXPECT_NE(h, qvf::cli::config_hash("sample", base, inputs));
  EXPECT_NE(h, qvf::cli::config_hash("verify", base, {{"tasks", "abd"}}));
}

TEST_F(CliTest, ConfigErrorsExitWithCodeTwo) {
  const auto bad_key = path("bad_key.json");
  qvf::write_file_atomic(bad_key, R"({"generator": {"temprature": 1}})");
  auto r = qvf_run({"--config", bad_key, "generate", "--out", path("x.jsonl")});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(error_of(r)["error"], "config");
  EXPECT_EQ(error_of(r)["field"], "generator.temprature");

  const auto malformed = path("malformed.json");
  qvf::write_file_atomic(malformed, "{\"seed\": ");
  EXPECT_EQ(qvf_run({"--config", malformed, "generate", "--out", path("x.jsonl")}).code, 2);

  r = qvf_run({"sample", "--tasks", path("t.jsonl"), "--mutation-rate", "1.5", "--out", path("x.jsonl")});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(error_of(r)["field"], "generator.mutation_rate");
  r = qvf_run({"generate", "--families", "T9", "--out", path("x.jsonl")});
  EXPECT_EQ(error_of(r)["field"], "families");
  r = qvf_run({"sample", "--tasks", path("t.jsonl"), "--generator", "http", "--out", path("x.jsonl")});
  EXPECT_EQ(error_of(r)["field"], "generator.endpoint");
  r = qvf_run({"eval", "--bench", path("b.jsonl"), "--n", "4", "--k", "8", "--out", path("r.json")});
  EXPECT_EQ(error_of(r)["field"], "ks");

  r = qvf_run({"generate"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(error_of(r)["error"], "usage");
  EXPECT_EQ(qvf_run({}).code, 2);
  EXPECT_FALSE(fs::exists(path("x.jsonl")));
}

TEST_F(CliTest, InputErrorsExitWithCodeTwo) {
  auto r = qvf_run({"sample", "--tasks", path("missing.jsonl"), "--out", path("x.jsonl")});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(error_of(r)["error"], "input");

  qvf::write_file_atomic(path("junk.jsonl"), "{\"schema\":\"task/1\"}\n");
  EXPECT_EQ(qvf_run({"sample", "--tasks", path("junk.jsonl"), "--out", path("x.jsonl")}).code, 2);

  ASSERT_EQ(qvf_run({"generate", "--count", "2", "--out", path("t.jsonl")}).code, 0);
  ASSERT_EQ(qvf_run({"sample", "--tasks", path("t.jsonl"), "--n", "2", "--out", path("c.jsonl")}).code, 0);
  auto cands = qvf::read_jsonl(path("c.jsonl"));
  cands.back()["task_id"] = "task-99999";
  qvf::write_file_atomic(path("c.jsonl"), qvf::to_jsonl(cands));
  r = qvf_run({"verify", "--tasks", path("t.jsonl"), "--candidates", path("c.jsonl"), "--out-dir", path("run")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(error_of(r)["message"].get<std::string>().find("unknown task"), std::string::npos);

  qvf::write_file_atomic(path("a.qt"), "QTNSR0");
  EXPECT_EQ(qvf_run({"merge", "--a", path("a.qt"), "--b", path("a.qt"), "--out", path("m.qt")}).code, 2);
}

TEST_F(CliTest, InfrastructureErrorsExitWithCodeThree) {
  ASSERT_EQ(qvf_run({"generate", "--count", "2", "--out", path("t.jsonl")}).code, 0);
  auto r = qvf_run({"sample", "--tasks", path("t.jsonl"), "--generator", "http", "--endpoint", "http://127.0.0.1:1",
                    "--retries", "0", "--gen-timeout-ms", "500", "--out", path("c.jsonl")});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(error_of(r)["error"], "infrastructure");
  EXPECT_FALSE(fs::exists(path("c.jsonl")));

  // The output path runs through a regular file, so the write fails.
  r = qvf_run({"generate", "--count", "2", "--out", path("t.jsonl/nested.jsonl")});
  EXPECT_EQ(r.code, 3);
}

TEST_F(CliTest, GrpoBatchWritesOneGroupPerTask) {
  ASSERT_EQ(qvf_run({"generate", "--count", "4", "--seed", "2", "--out", path("t.jsonl")}).code, 0);
  const auto r = qvf_run({"grpo-batch", "--tasks", path("t.jsonl"), "--group-size", "32", "--out", path("g.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto groups = qvf::read_jsonl(path("g.jsonl"));
  ASSERT_EQ(groups.size(), 4u);
  for (const auto& g : groups) {
    const auto rewards = g["rewards"].get<std::vector<double>>();
    const auto adv = g["advantages"].get<std::vector<double>>();
    ASSERT_EQ(rewards.size(), 32u);
    ASSERT_EQ(adv.size(), 32u);
    double sum = 0.0;
    for (double a : adv) sum += a;
    EXPECT_NEAR(sum / 32.0, 0.0, 1e-9);
  }
  EXPECT_TRUE(fs::exists(path("g.jsonl.manifest.json")));
}

TEST_F(CliTest, MergeWritesTensorFileAndManifest) {
  qvf::merge::TensorFile a, b;
  a.tensors.push_back({"w", {2}, {1.0f, 0.0f}});
  a.tensors.push_back({"z", {1}, {0.0f}});
  b.tensors.push_back({"w", {2}, {0.0f, 1.0f}});
  b.tensors.push_back({"z", {1}, {0.0f}});
  qvf::merge::write_tensor_file(path("a.qt"), a);
  qvf::merge::write_tensor_file(path("b.qt"), b);
  const auto r = qvf_run({"merge", "--a", path("a.qt"), "--b", path("b.qt"), "--t", "0.5", "--out", path("m.qt")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto merged = qvf::merge::read_tensor_file(path("m.qt"));
  const auto* w = merged.find("w");
  ASSERT_NE(w, nullptr);
  EXPECT_NEAR(w->data[0], std::sqrt(0.5), 1e-6);
  EXPECT_NEAR(w->data[1], std::sqrt(0.5), 1e-6);
  const auto manifest = json::parse(qvf::read_file(path("m.qt.manifest.json")));
  EXPECT_EQ(manifest["linear_fallbacks"], json::parse(R"([{"tensor":"z","reason":"zero_norm"}])"));
  EXPECT_EQ(manifest["prng_algorithm"], "mt19937_64");
}

TEST_F(CliTest, HelpExitsCleanly) {
  const auto r = qvf_run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("mine-dpo"), std::string::npos);
}
