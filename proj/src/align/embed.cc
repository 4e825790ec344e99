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

#include "qvf/align/embed.h"

#include <cmath>

#include "httplib.h"
#include "json.hpp"
#include "qvf/common/hash.h"

namespace qvf::align {

Embedding embed_trigram(std::string_view text) {
  Embedding e;
  e.embedder_id = std::string(kBuiltinEmbedderId);
  e.vector.assign(kEmbeddingDim, 0.0);
  if (text.empty()) {
    e.empty = true;
    return e;
  }
  if (text.size() < 3) {
    e.vector[fnv1a64(text) % kEmbeddingDim] = 1.0;
    return e;
  }
  for (size_t i = 0; i + 3 <= text.size(); ++i) e.vector[fnv1a64(text.substr(i, 3)) % kEmbeddingDim] += 1.0;
  double norm = 0.0;
  for (double v : e.vector) norm += v * v;
  norm = std::sqrt(norm);
  for (double& v : e.vector) v /= norm;
  return e;
}

double cosine(const Embedding& a, const Embedding& b) {
  if (a.vector.size() != b.vector.size())
    throw std::invalid_argument("cosine: dimension " + std::to_string(a.vector.size()) + " vs " +
                                std::to_string(b.vector.size()));
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (size_t i = 0; i < a.vector.size(); ++i) {
    dot += a.vector[i] * b.vector[i];
    na += a.vector[i] * a.vector[i];
    nb += b.vector[i] * b.vector[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

HttpEmbedder::HttpEmbedder(std::string endpoint, int timeout_ms) : endpoint_(std::move(endpoint)), timeout_ms_(timeout_ms) {
  if (timeout_ms_ <= 0) throw std::invalid_argument("embedder timeout must be positive");
}

Embedding HttpEmbedder::embed(std::string_view text) const {
  using nlohmann::json;
  httplib::Client client(endpoint_);
  if (!client.is_valid()) throw EmbedError("invalid embedder endpoint '" + endpoint_ + "'");
  const auto timeout = std::chrono::milliseconds(timeout_ms_);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  auto res = client.Post("/embed", json{{"text", text}}.dump(), "application/json");
  if (!res) throw EmbedError("POST /embed: " + httplib::to_string(res.error()));
  if (res->status != 200) throw EmbedError("POST /embed returned HTTP " + std::to_string(res->status));
  const json body = json::parse(res->body, nullptr, false);
  if (body.is_discarded() || !body.is_object() || !body.contains("vector") || !body["vector"].is_array())
    throw EmbedError("embed response lacks a 'vector' array");
  Embedding e;
  e.embedder_id = body.value("embedder_id", id());
  for (const auto& v : body["vector"]) {
    if (!v.is_number()) throw EmbedError("embed vector holds a non-number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw EmbedError("embed vector holds a non-finite value");
    e.vector.push_back(x);
  }
  if (e.vector.empty()) throw EmbedError("embed vector is empty");
  e.empty = text.empty();
  return e;
}

}  // namespace qvf::align
