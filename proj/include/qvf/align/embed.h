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

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qvf::align {

inline constexpr size_t kEmbeddingDim = 256;
inline constexpr std::string_view kBuiltinEmbedderId = "trigram-fnv1a-256/1";

struct Embedding {
  std::vector<double> vector;
  std::string embedder_id;
  /// The text had no content; the vector is all zeros.
  bool empty = false;
};

class EmbedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Term frequencies of byte trigrams hashed into kEmbeddingDim buckets,
/// L2-normalized. Text shorter than three bytes is a single shingle.
Embedding embed_trigram(std::string_view text);

/// Zero when either vector is zero. Throws on dimension mismatch.
double cosine(const Embedding& a, const Embedding& b);

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::string id() const = 0;
  virtual Embedding embed(std::string_view text) const = 0;
};

class TrigramEmbedder : public Embedder {
 public:
  std::string id() const override { return std::string(kBuiltinEmbedderId); }
  Embedding embed(std::string_view text) const override { return embed_trigram(text); }
};

/// POST <endpoint>/embed {"text"} -> {"vector": [...], "embedder_id"?}.
class HttpEmbedder : public Embedder {
 public:
  explicit HttpEmbedder(std::string endpoint, int timeout_ms = 30000);
  std::string id() const override { return "http:" + endpoint_; }
  Embedding embed(std::string_view text) const override;

 private:
  std::string endpoint_;
  int timeout_ms_;
};

}  // namespace qvf::align
