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

#include "qvf/cli/config.h"

#include <cmath>

#include "qvf/common/hash.h"

namespace qvf::cli {

using nlohmann::json;

json default_config() {
  json mutations = json::array();
  for (auto op : candidates::kAllMutationOps) mutations.push_back(candidates::mutation_code(op));
  return {{"seed", 0},
          {"count", 200},
          {"families", {"T1", "T2", "T3", "T4"}},
          {"format", "task"},
          {"generator",
           {{"kind", "mock"},
            {"mutation_rate", 0.5},
            {"mutations", mutations},
            {"endpoint", ""},
            {"timeout_ms", 30000},
            {"retries", 2},
            {"max_in_flight", 4}}},
          {"n", 16},
          {"temperature", 1.0},
          {"max_tokens", 1024},
          {"reward_weights", {{"quantum", 1.0}, {"format", 0.1}}},
          {"format_reward", "graded"},
          {"pool_size", 1},
          {"timeout_ms", 10000},
          {"worker", {{"argv", json::array()}, {"grace_ms", 200}}},
          {"n_per_prompt", 16},
          {"embedder", {{"kind", "trigram"}, {"endpoint", ""}, {"timeout_ms", 30000}}},
          {"group_size", 32},
          {"ks", {1}},
          {"greedy", false},
          {"bootstrap_resamples", 1000},
          {"t", 0.5},
          {"parallel_threshold", 1e-7}};
}

void merge_config(json& base, const json& overrides, const std::string& prefix) {
  if (!overrides.is_object()) throw ConfigError(prefix.empty() ? "$" : prefix, "configuration must be a JSON object");
  for (const auto& [key, value] : overrides.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!base.contains(key)) throw ConfigError(path, "unknown configuration key '" + path + "'");
    if (base[key].is_object()) {
      merge_config(base[key], value, path);
    } else {
      base[key] = value;
    }
  }
}

namespace {

template <class T>
T get(const json& root, const std::string& path) {
  const json* node = &root;
  size_t start = 0;
  while (true) {
    const size_t dot = path.find('.', start);
    node = &node->at(path.substr(start, dot - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  try {
    return node->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(path, "'" + path + "' has the wrong type: " + node->dump());
  }
}

void require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ConfigError(field, message);
}

int64_t get_int(const json& root, const std::string& path) {
  const double v = get<double>(root, path);
  require(std::floor(v) == v, path, "'" + path + "' must be an integer");
  return static_cast<int64_t>(v);
}

}  // namespace

RunConfig parse_config(const json& merged) {
  RunConfig c;
  c.effective = merged;
  const int64_t seed = get_int(merged, "seed");
  require(seed >= 0, "seed", "seed must be non-negative");
  c.seed = static_cast<uint64_t>(seed);
  const int64_t count = get_int(merged, "count");
  require(count >= 1, "count", "count must be at least 1");
  c.count = static_cast<size_t>(count);
  c.families = get<std::vector<std::string>>(merged, "families");
  require(!c.families.empty(), "families", "at least one template family is required");
  c.format = get<std::string>(merged, "format");
  require(c.format == "task" || c.format == "bench", "format", "format must be 'task' or 'bench'");

  c.generator = get<std::string>(merged, "generator.kind");
  require(c.generator == "mock" || c.generator == "http", "generator.kind", "generator must be 'mock' or 'http'");
  c.mock.mutation_rate = get<double>(merged, "generator.mutation_rate");
  require(c.mock.mutation_rate >= 0.0 && c.mock.mutation_rate <= 1.0, "generator.mutation_rate",
          "mutation_rate must lie in [0, 1]");
  c.mock.allowed.clear();
  for (const auto& m : get<std::vector<std::string>>(merged, "generator.mutations")) {
    try {
      c.mock.allowed.push_back(candidates::parse_mutation(m));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("generator.mutations", e.what());
    }
  }
  require(c.mock.mutation_rate == 0.0 || !c.mock.allowed.empty(), "generator.mutations",
          "a positive mutation_rate needs at least one mutation operator");
  c.http.endpoint = get<std::string>(merged, "generator.endpoint");
  require(c.generator != "http" || !c.http.endpoint.empty(), "generator.endpoint", "the http generator needs an endpoint");
  c.http.timeout_ms = static_cast<int>(get_int(merged, "generator.timeout_ms"));
  require(c.http.timeout_ms > 0, "generator.timeout_ms", "generator timeout must be positive");
  c.http.retries = static_cast<int>(get_int(merged, "generator.retries"));
  require(c.http.retries >= 0, "generator.retries", "retries must be non-negative");
  const int64_t in_flight = get_int(merged, "generator.max_in_flight");
  require(in_flight >= 1, "generator.max_in_flight", "max_in_flight must be at least 1");
  c.http.max_in_flight = static_cast<size_t>(in_flight);

  c.n = static_cast<int>(get_int(merged, "n"));
  require(c.n >= 1, "n", "n must be at least 1");
  c.temperature = get<double>(merged, "temperature");
  require(c.temperature >= 0.0, "temperature", "temperature must be non-negative");
  c.max_tokens = static_cast<int>(get_int(merged, "max_tokens"));
  require(c.max_tokens >= 1, "max_tokens", "max_tokens must be positive");

  c.weights.w_quantum = get<double>(merged, "reward_weights.quantum");
  c.weights.w_format = get<double>(merged, "reward_weights.format");
  require(c.weights.w_quantum >= 0.0 && c.weights.w_format >= 0.0, "reward_weights", "reward weights must be non-negative");
  const auto mode = get<std::string>(merged, "format_reward");
  require(mode == "graded" || mode == "binary", "format_reward", "format_reward must be 'graded' or 'binary'");
  c.format_mode = mode == "graded" ? verify::FormatRewardMode::graded : verify::FormatRewardMode::binary;

  const int64_t pool = get_int(merged, "pool_size");
  require(pool >= 1 && pool <= 256, "pool_size", "pool_size must lie in 1..256");
  c.pool_size = static_cast<size_t>(pool);
  c.timeout_ms = get_int(merged, "timeout_ms");
  require(c.timeout_ms > 0, "timeout_ms", "timeout_ms must be positive");
  const auto argv = get<std::vector<std::string>>(merged, "worker.argv");
  const int64_t grace = get_int(merged, "worker.grace_ms");
  require(grace >= 0, "worker.grace_ms", "grace_ms must be non-negative");
  if (!argv.empty()) c.worker = sandbox::WorkerCommand{argv, grace};

  const int64_t npp = get_int(merged, "n_per_prompt");
  require(npp >= 1, "n_per_prompt", "n_per_prompt must be at least 1");
  c.n_per_prompt = static_cast<size_t>(npp);
  c.embedder = get<std::string>(merged, "embedder.kind");
  require(c.embedder == "trigram" || c.embedder == "http", "embedder.kind", "embedder must be 'trigram' or 'http'");
  c.embedder_endpoint = get<std::string>(merged, "embedder.endpoint");
  require(c.embedder != "http" || !c.embedder_endpoint.empty(), "embedder.endpoint", "the http embedder needs an endpoint");
  c.embedder_timeout_ms = static_cast<int>(get_int(merged, "embedder.timeout_ms"));
  require(c.embedder_timeout_ms > 0, "embedder.timeout_ms", "embedder timeout must be positive");

  const int64_t group = get_int(merged, "group_size");
  require(group >= 2, "group_size", "group_size must be at least 2");
  c.group_size = static_cast<size_t>(group);
  c.ks = get<std::vector<int>>(merged, "ks");
  require(!c.ks.empty(), "ks", "at least one k is required");
  c.greedy = get<bool>(merged, "greedy");
  for (int k : c.ks) require(c.greedy || (k >= 1 && k <= c.n), "ks", "every k must lie in 1..n");
  const int64_t boot = get_int(merged, "bootstrap_resamples");
  require(boot >= 0, "bootstrap_resamples", "bootstrap_resamples must be non-negative");
  c.bootstrap_resamples = static_cast<size_t>(boot);

  c.t = get<double>(merged, "t");
  require(c.t >= 0.0 && c.t <= 1.0, "t", "t must lie in [0, 1]");
  c.parallel_threshold = get<double>(merged, "parallel_threshold");
  require(c.parallel_threshold >= 0.0, "parallel_threshold", "parallel_threshold must be non-negative");
  return c;
}

std::string config_hash(const std::string& command, const json& effective,
                        const std::map<std::string, std::string>& input_digests) {
  json cfg = effective;
  cfg.erase("pool_size");
  const json doc = {{"command", command}, {"config", cfg}, {"inputs", input_digests}};
  return sha256_hex(doc.dump());
}

}  // namespace qvf::cli
