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

#include "qvf/align/pairs.h"

#include "grouping.h"
#include "qvf/common/hash.h"
#include "qvf/common/rng.h"

namespace qvf::align {

using nlohmann::json;

json to_json(const PreferencePair& p) {
  return {{"schema", kPairSchema},     {"prompt_id", p.prompt_id},     {"prompt", p.prompt},
          {"chosen", p.chosen},        {"rejected", p.rejected},       {"chosen_id", p.chosen_id},
          {"rejected_id", p.rejected_id}, {"similarity", p.similarity}, {"embedder_id", p.embedder_id}};
}

PreferencePair pair_from_json(const json& j) {
  try {
    if (j.at("schema").get<std::string>() != kPairSchema)
      throw std::invalid_argument("pair: unsupported schema " + j.at("schema").dump());
    PreferencePair p;
    p.prompt_id = j.at("prompt_id").get<std::string>();
    p.prompt = j.at("prompt").get<std::string>();
    p.chosen = j.at("chosen").get<std::string>();
    p.rejected = j.at("rejected").get<std::string>();
    p.chosen_id = j.value("chosen_id", "");
    p.rejected_id = j.value("rejected_id", "");
    p.similarity = j.at("similarity").get<double>();
    p.embedder_id = j.at("embedder_id").get<std::string>();
    return p;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("pair: ") + e.what());
  }
}

MiningResult mine_pairs(const std::vector<sandbox::VerifiedSample>& samples, const Embedder& embedder,
                        size_t n_per_prompt, uint64_t seed) {
  if (n_per_prompt < 1) throw std::invalid_argument("n_per_prompt must be at least 1");
  MiningResult out;
  for (const auto& group : detail::group_by_prompt(samples, n_per_prompt)) {
    ++out.stats.prompts;
    std::vector<const sandbox::VerifiedSample*> accepted;
    std::vector<const sandbox::VerifiedSample*> rejected;
    for (const auto* s : group.samples) (s->bucket == 'A' ? accepted : rejected).push_back(s);
    if (accepted.empty()) {
      ++out.stats.discarded_no_accepted;
      continue;
    }
    if (rejected.empty()) {
      ++out.stats.discarded_no_rejected;
      continue;
    }
    Rng rng(derive_seed(seed, fnv1a64(group.prompt_id)));
    const sandbox::VerifiedSample* chosen = rng.pick(accepted);
    const Embedding anchor = embedder.embed(chosen->completion);
    const sandbox::VerifiedSample* best = nullptr;
    double best_sim = 0.0;
    for (const auto* r : rejected) {
      const double sim = cosine(anchor, embedder.embed(r->completion));
      if (!best || sim > best_sim) {
        best = r;
        best_sim = sim;
      }
    }
    out.pairs.push_back({group.prompt_id, chosen->prompt, chosen->completion, best->completion, chosen->candidate_id,
                         best->candidate_id, best_sim, anchor.embedder_id});
  }
  out.stats.pairs = out.pairs.size();
  return out;
}

}  // namespace qvf::align
