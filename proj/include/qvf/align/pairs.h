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

#include <string>
#include <vector>

#include "json.hpp"
#include "qvf/align/embed.h"
#include "qvf/sandbox/batch.h"

namespace qvf::align {

inline constexpr std::string_view kPairSchema = "dpo/1";

struct PreferencePair {
  std::string prompt_id;
  std::string prompt;
  std::string chosen;
  std::string rejected;
  std::string chosen_id;
  std::string rejected_id;
  double similarity = 0.0;
  std::string embedder_id;
};

nlohmann::json to_json(const PreferencePair& p);
PreferencePair pair_from_json(const nlohmann::json& j);

struct MiningStats {
  size_t prompts = 0;
  size_t pairs = 0;
  size_t discarded_no_accepted = 0;
  size_t discarded_no_rejected = 0;
};

struct MiningResult {
  std::vector<PreferencePair> pairs;
  MiningStats stats;
};

/// Groups samples by prompt (in order of first appearance), keeps the
/// n_per_prompt lowest candidate indices of each, picks a seeded-uniform
/// accepted sample and pairs it with the most similar rejected completion.
MiningResult mine_pairs(const std::vector<sandbox::VerifiedSample>& samples, const Embedder& embedder,
                        size_t n_per_prompt = 16, uint64_t seed = 0);

}  // namespace qvf::align
