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

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "qvf/sandbox/batch.h"

namespace qvf::align::detail {

struct PromptGroup {
  std::string prompt_id;
  std::vector<const sandbox::VerifiedSample*> samples;
};

/// Prompts in order of first appearance; each keeps its `limit` lowest candidate indices.
inline std::vector<PromptGroup> group_by_prompt(const std::vector<sandbox::VerifiedSample>& samples, size_t limit) {
  std::vector<PromptGroup> groups;
  std::map<std::string, size_t> slot;
  for (const auto& s : samples) {
    auto [it, fresh] = slot.try_emplace(s.prompt_id, groups.size());
    if (fresh) groups.push_back({s.prompt_id, {}});
    groups[it->second].samples.push_back(&s);
  }
  for (auto& g : groups) {
    std::stable_sort(g.samples.begin(), g.samples.end(),
                     [](const auto* a, const auto* b) { return a->candidate_index < b->candidate_index; });
    if (g.samples.size() > limit) g.samples.resize(limit);
  }
  return groups;
}

}  // namespace qvf::align::detail
