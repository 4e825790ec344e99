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
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qvf/candidates/source.h"
#include "qvf/sandbox/worker.h"
#include "qvf/verify/reward.h"

namespace qvf::cli {

/// Invalid configuration or input. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Every recognized key with its default value.
nlohmann::json default_config();

/// Deep-merges `overrides` into `base`. Unknown keys are a ConfigError.
void merge_config(nlohmann::json& base, const nlohmann::json& overrides, const std::string& prefix = "");

struct RunConfig {
  uint64_t seed = 0;
  size_t count = 200;
  std::vector<std::string> families;
  std::string format = "task";

  std::string generator = "mock";
  candidates::MockOptions mock;
  candidates::HttpOptions http;

  int n = 16;
  double temperature = 1.0;
  int max_tokens = 1024;

  verify::RewardWeights weights;
  verify::FormatRewardMode format_mode = verify::FormatRewardMode::graded;

  size_t pool_size = 1;
  int64_t timeout_ms = 10000;
  std::optional<sandbox::WorkerCommand> worker;

  size_t n_per_prompt = 16;
  std::string embedder = "trigram";
  std::string embedder_endpoint;
  int embedder_timeout_ms = 30000;

  size_t group_size = 32;
  std::vector<int> ks{1};
  bool greedy = false;
  size_t bootstrap_resamples = 1000;

  double t = 0.5;
  double parallel_threshold = 1e-7;

  /// The merged JSON the struct was read from.
  nlohmann::json effective;
};

/// Validates every field. Throws ConfigError naming the offending key.
RunConfig parse_config(const nlohmann::json& merged);

/// SHA-256 over the command, the effective configuration (minus pool_size,
/// which cannot change outputs) and the contents of every input file.
std::string config_hash(const std::string& command, const nlohmann::json& effective,
                        const std::map<std::string, std::string>& input_digests);

}  // namespace qvf::cli
