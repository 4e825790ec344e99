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

#include <cmath>
#include <map>
#include <numeric>
#include <thread>

#include "gtest/gtest.h"
#include "httplib.h"
#include "qvf/align/objectives.h"
#include "qvf/align/pairs.h"
#include "qvf/candidates/mock.h"
#include "qvf/common/hash.h"
#include "task_fixtures.h"

using namespace qvf::align;
using nlohmann::json;
using qvf::sandbox::VerifiedSample;

namespace {

// Embeds text by looking it up in a fixed table.
class TableEmbedder : public Embedder {
 public:
  explicit TableEmbedder(std::map<std::string, std::vector<double>> table) : table_(std::move(table)) {}
  std::string id() const override { return "table"; }
  Embedding embed(std::string_view text) const override { return {table_.at(std::string(text)), "table", false}; }

 private:
  std::map<std::string, std::vector<double>> table_;
};

VerifiedSample sample(const std::string& prompt, int index, char bucket, const std::string& completion,
                      double total = -1) {
  VerifiedSample s;
  s.prompt_id = prompt;
  s.prompt = "prompt for " + prompt;
  s.candidate_id = prompt + "/c" + std::to_string(index);
  s.candidate_index = index;
  s.completion = completion;
  s.bucket = bucket;
  s.rewards.r_quantum = bucket == 'A' ? 1.0 : 0.5;
  s.rewards.total = total >= 0 ? total : s.rewards.r_quantum;
  return s;
}

std::vector<VerifiedSample> pipeline_samples(size_t tasks, int n, uint64_t seed) {
  auto ts = qvf::testing::dataset(tasks, seed);
  std::vector<std::vector<qvf::candidates::Candidate>> cands;
  qvf::candidates::GenerationRequest req;
  req.n = n;
  req.seed = seed;
  for (const auto& t : ts) cands.push_back(qvf::candidates::mock_generate(t, req, {0.5}));
  qvf::sandbox::Sandbox sb;
  return qvf::sandbox::verify_batch(ts, cands, sb, {2}).samples;
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double pop_std(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / v.size());
}

}  // namespace

TEST(Embed, identical_texts_and_norm) {
  auto a = embed_trigram("circuit qc 2 2\nh qc 0\n");
  auto b = embed_trigram("circuit qc 2 2\nh qc 0\n");
  EXPECT_NEAR(cosine(a, b), 1.0, 1e-12);
  EXPECT_EQ(a.vector.size(), kEmbeddingDim);
  double n = 0.0;
  for (double v : a.vector) n += v * v;
  EXPECT_NEAR(n, 1.0, 1e-12);
  EXPECT_EQ(a.embedder_id, kBuiltinEmbedderId);
}

TEST(Embed, empty_text_is_flagged_zero) {
  auto e = embed_trigram("");
  EXPECT_TRUE(e.empty);
  for (double v : e.vector) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(cosine(e, embed_trigram("abc")), 0.0);
  auto s = embed_trigram("ab");
  EXPECT_FALSE(s.empty);
  EXPECT_NEAR(cosine(s, embed_trigram("ab")), 1.0, 1e-12);
}

TEST(Embed, shared_trigram_mass_matches_unhashed_oracle) {
  // Oracle: cosine of raw trigram count vectors keyed by the trigram itself.
  auto counts = [](const std::string& s) {
    std::map<std::string, double> m;
    for (size_t i = 0; i + 3 <= s.size(); ++i) m[s.substr(i, 3)] += 1.0;
    return m;
  };
  auto oracle = [&](const std::string& x, const std::string& y) {
    auto a = counts(x);
    auto b = counts(y);
    double dot = 0, na = 0, nb = 0;
    for (auto& [k, v] : a) {
      na += v * v;
      if (b.count(k)) dot += v * b[k];
    }
    for (auto& [k, v] : b) nb += v * v;
    return dot / std::sqrt(na * nb);
  };
  auto no_collisions = [](const std::string& x, const std::string& y) {
    std::map<uint64_t, std::string> seen;
    for (const auto& s : {x, y}) {
      for (size_t i = 0; i + 3 <= s.size(); ++i) {
        auto tri = s.substr(i, 3);
        auto [it, fresh] = seen.try_emplace(qvf::fnv1a64(tri) % kEmbeddingDim, tri);
        if (!fresh && it->second != tri) return false;
      }
    }
    return true;
  };
  ASSERT_TRUE(no_collisions("abcabc", "abc"));
  EXPECT_NEAR(cosine(embed_trigram("abcabc"), embed_trigram("abc")), 2.0 / std::sqrt(6.0), 1e-12);
  EXPECT_GT(cosine(embed_trigram("abcabc"), embed_trigram("abc")), 0.0);

  const std::vector<std::pair<std::string, std::string>> cases = {
      {"circuit qc", "circuit pm"}, {"transpile", "spline"}, {"hello world", "world hello"}};
  for (const auto& [x, y] : cases) {
    if (!no_collisions(x, y)) continue;
    EXPECT_NEAR(cosine(embed_trigram(x), embed_trigram(y)), oracle(x, y), 1e-12) << x << " / " << y;
  }
}

TEST(Embed, cosine_dimension_mismatch) {
  Embedding a{{1.0, 0.0}, "x"};
  Embedding b{{1.0}, "x"};
  EXPECT_THROW(cosine(a, b), std::invalid_argument);
}

TEST(Embed, http_client) {
  httplib::Server server;
  std::string mode = "ok";
  server.Post("/embed", [&](const httplib::Request& req, httplib::Response& res) {
    const auto body = json::parse(req.body);
    if (mode == "500") {
      res.status = 500;
      return;
    }
    if (mode == "bad") {
      res.set_content(R"({"vec": []})", "application/json");
      return;
    }
    const double len = static_cast<double>(body["text"].get<std::string>().size());
    res.set_content(json{{"vector", {len, 1.0}}, {"embedder_id", "stub-2"}}.dump(), "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  HttpEmbedder e("http://127.0.0.1:" + std::to_string(port), 2000);
  auto v = e.embed("abcd");
  EXPECT_EQ(v.vector, (std::vector<double>{4.0, 1.0}));
  EXPECT_EQ(v.embedder_id, "stub-2");
  mode = "500";
  EXPECT_THROW(e.embed("x"), EmbedError);
  mode = "bad";
  EXPECT_THROW(e.embed("x"), EmbedError);
  server.stop();
  th.join();
  EXPECT_THROW(HttpEmbedder("http://127.0.0.1:1", 300).embed("x"), EmbedError);
}

TEST(MinePairs, argmax_by_construction) {
  TableEmbedder emb({{"a", {1.0, 0.0}}, {"b1", {0.9, std::sqrt(1 - 0.81)}}, {"b2", {0.0, 1.0}}});
  std::vector<VerifiedSample> s = {sample("p", 0, 'A', "a"), sample("p", 1, 'B', "b1"), sample("p", 2, 'B', "b2")};
  auto r = mine_pairs(s, emb);
  ASSERT_EQ(r.pairs.size(), 1u);
  EXPECT_EQ(r.pairs[0].chosen, "a");
  EXPECT_EQ(r.pairs[0].rejected, "b1");
  EXPECT_NEAR(r.pairs[0].similarity, 0.9, 1e-12);
  EXPECT_EQ(r.pairs[0].embedder_id, "table");
}

TEST(MinePairs, discards_and_ties) {
  TableEmbedder emb({{"a", {1.0, 0.0}}, {"b", {0.0, 1.0}}, {"c", {0.0, 1.0}}});
  std::vector<VerifiedSample> s = {sample("no_a", 0, 'B', "b"), sample("no_a", 1, 'B', "c"),
                                   sample("no_b", 0, 'A', "a"), sample("tie", 3, 'B', "c"),
                                   sample("tie", 0, 'A', "a"), sample("tie", 1, 'B', "b")};
  auto r = mine_pairs(s, emb);
  ASSERT_EQ(r.pairs.size(), 1u);
  EXPECT_EQ(r.pairs[0].prompt_id, "tie");
  EXPECT_EQ(r.pairs[0].rejected_id, "tie/c1");
  EXPECT_EQ(r.stats.prompts, 3u);
  EXPECT_EQ(r.stats.discarded_no_accepted, 1u);
  EXPECT_EQ(r.stats.discarded_no_rejected, 1u);
}

TEST(MinePairs, n_per_prompt_limits_candidates) {
  TableEmbedder emb({{"a", {1.0, 0.0}}, {"b", {0.0, 1.0}}});
  std::vector<VerifiedSample> s = {sample("p", 0, 'A', "a"), sample("p", 1, 'A', "a"), sample("p", 2, 'B', "b")};
  EXPECT_TRUE(mine_pairs(s, emb, 2).pairs.empty());
  EXPECT_EQ(mine_pairs(s, emb, 3).pairs.size(), 1u);
  EXPECT_THROW(mine_pairs(s, emb, 0), std::invalid_argument);
}

TEST(MinePairs, exhaustive_max_similarity_on_pipeline_output) {
  auto samples = pipeline_samples(30, 16, 5);
  TrigramEmbedder emb;
  auto r = mine_pairs(samples, emb, 16, 5);
  EXPECT_GT(r.pairs.size(), 0u);
  std::map<std::string, std::vector<const VerifiedSample*>> by_prompt;
  for (const auto& s : samples) by_prompt[s.prompt_id].push_back(&s);
  for (const auto& p : r.pairs) {
    const auto& group = by_prompt.at(p.prompt_id);
    const VerifiedSample* chosen = nullptr;
    const VerifiedSample* rejected = nullptr;
    for (const auto* s : group) {
      if (s->candidate_id == p.chosen_id) chosen = s;
      if (s->candidate_id == p.rejected_id) rejected = s;
    }
    ASSERT_TRUE(chosen && rejected);
    EXPECT_EQ(chosen->rewards.r_quantum, 1.0);
    EXPECT_LT(rejected->rewards.r_quantum, 1.0);
    const auto anchor = embed_trigram(chosen->completion);
    for (const auto* s : group) {
      if (s->bucket != 'B') continue;
      const double sim = cosine(anchor, embed_trigram(s->completion));
      EXPECT_LE(sim, p.similarity);
      if (sim == p.similarity) EXPECT_GE(s->candidate_index, rejected->candidate_index);
    }
  }
  for (const auto& [id, group] : by_prompt) {
    const bool has_a = std::any_of(group.begin(), group.end(), [](const auto* s) { return s->bucket == 'A'; });
    const bool listed = std::any_of(r.pairs.begin(), r.pairs.end(), [&](const auto& p) { return p.prompt_id == id; });
    if (!has_a) EXPECT_FALSE(listed) << id;
  }
  auto again = mine_pairs(samples, emb, 16, 5);
  for (size_t i = 0; i < r.pairs.size(); ++i) EXPECT_EQ(to_json(r.pairs[i]), to_json(again.pairs[i]));
}

TEST(MinePairs, json_round_trip) {
  PreferencePair p{"p", "prompt", "c", "r", "p/c0", "p/c1", 0.25, "x"};
  auto j = to_json(p);
  EXPECT_EQ(j["schema"], "dpo/1");
  EXPECT_EQ(to_json(pair_from_json(j)), j);
}

TEST(Advantages, examples) {
  EXPECT_EQ(grpo_advantages({0.5, 0.5, 0.5}), (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(grpo_advantages({0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1}), std::vector<double>(7, 0.0));
  auto a = grpo_advantages({1.0, 0.0});
  EXPECT_NEAR(a[0], 1.0, 1e-5);
  EXPECT_NEAR(a[1], -1.0, 1e-5);
  EXPECT_THROW(grpo_advantages({1.0}), std::invalid_argument);
  EXPECT_THROW(grpo_advantages({1.0, NAN}), std::invalid_argument);
}

TEST(Advantages, standardized_groups_of_32) {
  qvf::Rng rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> r(32);
    for (auto& x : r) x = trial % 2 ? static_cast<double>(rng.below(11)) / 10.0 : rng.uniform(-3, 3);
    if (std::all_of(r.begin(), r.end(), [&](double x) { return x == r[0]; })) continue;
    auto a = grpo_advantages(r);
    EXPECT_LE(std::abs(mean(a)), 1e-9);
    EXPECT_NEAR(pop_std(a), 1.0, 1e-4);
    const double bound = (*std::max_element(r.begin(), r.end()) - *std::min_element(r.begin(), r.end())) / pop_std(r);
    for (double x : a) EXPECT_LE(std::abs(x), bound);

    auto shifted = r;
    for (auto& x : shifted) x += 2.5;
    auto as = grpo_advantages(shifted);
    auto scaled = r;
    for (auto& x : scaled) x *= 3.0;
    auto ac = grpo_advantages(scaled);
    for (size_t i = 0; i < r.size(); ++i) {
      EXPECT_NEAR(as[i], a[i], 1e-9);
      EXPECT_NEAR(ac[i], a[i], 1e-4);
    }
  }
}

TEST(Dpo, examples_and_properties) {
  EXPECT_NEAR(dpo_loss(-3, -3, -3, -3), std::log(2.0), 1e-9);
  const double oracle = std::log(1.0 + std::exp(-1.0));
  EXPECT_NEAR(dpo_loss(-1.0, -6.0, -2.0, -2.0), oracle, 1e-12);
  EXPECT_NEAR(oracle, 0.313262, 1e-6);

  double prev = INFINITY;
  for (double m = -50; m <= 50; m += 0.5) {
    const double l = dpo_loss(m, 0, 0, 0);
    EXPECT_LT(l, prev);
    prev = l;
    EXPECT_NEAR(dpo_loss(m + 7, 0 + 7, 0 + 7, 0 + 7), l, 1e-9);
  }
  EXPECT_NEAR(dpo_loss(-1e4, 0, 0, 0), 2000.0, 1e-9);
  EXPECT_GE(dpo_loss(1e4, 0, 0, 0), 0.0);
  EXPECT_THROW(dpo_loss(NAN, 0, 0, 0), std::invalid_argument);
  EXPECT_THROW(dpo_loss(0, 0, 0, 0, {0.0}), std::invalid_argument);
}

TEST(Grpo, objective_examples) {
  EXPECT_DOUBLE_EQ(grpo_objective({-1.0}, {-1.0}, {-1.0}, {1.0}), -1.0);
  EXPECT_DOUBLE_EQ(grpo_objective({-1, -2, -3}, {-2, -1, -3}, {-1, -2, -3}, {0, 0, 0}), 0.0);
  // ratio e^0.5 is clipped to 1.2 for a positive advantage; the unclipped
  // term is smaller for a negative one.
  EXPECT_NEAR(grpo_objective({0.5}, {0.0}, {0.5}, {1.0}), -1.2, 1e-12);
  EXPECT_NEAR(grpo_objective({0.5}, {0.0}, {0.5}, {-1.0}), std::exp(0.5), 1e-12);
  const double kl = std::exp(0.3) - 0.3 - 1.0;
  EXPECT_NEAR(grpo_objective({-1.0}, {-1.0}, {-0.7}, {0.0}), 0.01 * kl, 1e-15);
  EXPECT_THROW(grpo_objective({1}, {1, 2}, {1}, {1}), std::invalid_argument);
  EXPECT_THROW(grpo_objective({}, {}, {}, {}), std::invalid_argument);
  EXPECT_THROW(grpo_objective({1}, {1}, {1}, {1}, {0.01, 1.0}), std::invalid_argument);
  EXPECT_THROW(grpo_objective({INFINITY}, {1}, {1}, {1}), std::invalid_argument);
}

TEST(Grpo, kl_term_is_non_negative) {
  qvf::Rng rng(77);
  for (int i = 0; i < 10000; ++i) {
    const double scale = std::pow(10.0, rng.uniform(-8, 1.3));
    const double a = rng.uniform(-1, 1) * scale;
    const double b = rng.uniform(-1, 1) * scale;
    EXPECT_GE(kl_estimator(a, b), 0.0) << a << " " << b;
  }
}

TEST(Grpo, groups_from_samples) {
  std::vector<VerifiedSample> s = {sample("p", 1, 'A', "x", 1.1), sample("q", 0, 'B', "y", 0.1),
                                   sample("p", 0, 'B', "z", 0.6), sample("p", 2, 'A', "w", 1.1)};
  auto g = grpo_groups(s, 32);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g[0].prompt_id, "p");
  EXPECT_EQ(g[0].completions, (std::vector<std::string>{"z", "x", "w"}));
  EXPECT_EQ(g[0].rewards, (std::vector<double>{0.6, 1.1, 1.1}));
  EXPECT_EQ(g[0].advantages, grpo_advantages({0.6, 1.1, 1.1}));
  EXPECT_EQ(grpo_groups(s, 2)[0].completions.size(), 2u);
  auto j = to_json(g[0]);
  EXPECT_EQ(j["schema"], "grpo/1");
  EXPECT_THROW(grpo_groups(s, 1), std::invalid_argument);
}
