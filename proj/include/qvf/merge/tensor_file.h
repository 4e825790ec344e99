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

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qvf::merge {

/// "QTNSR1", u32 little-endian index length, JSON index, f32 little-endian payload.
inline constexpr std::string_view kMagic = "QTNSR1";

class FormatError : public std::runtime_error {
 public:
  enum class Kind { bad_magic, truncated, bounds, overlap, schema };

  FormatError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct Tensor {
  std::string name;
  std::vector<int64_t> shape;
  std::vector<float> data;

  size_t element_count() const;
};

struct TensorFile {
  std::vector<Tensor> tensors;

  const Tensor* find(std::string_view name) const;
};

/// Names sorted, payload packed in that order, compact index JSON.
std::string serialize(const TensorFile& file);
TensorFile deserialize(std::string_view bytes);

TensorFile read_tensor_file(const std::filesystem::path& path);
void write_tensor_file(const std::filesystem::path& path, const TensorFile& file);

/// Tensors sorted by name. Throws on duplicate names or data/shape mismatch.
TensorFile canonicalize(TensorFile file);

}  // namespace qvf::merge
