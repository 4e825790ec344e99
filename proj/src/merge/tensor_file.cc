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

#include "qvf/merge/tensor_file.h"

#include <algorithm>
#include <bit>
#include <cstring>
#include <set>

#include "json.hpp"
#include "qvf/common/io.h"

namespace qvf::merge {

using nlohmann::json;
using Kind = FormatError::Kind;

size_t Tensor::element_count() const {
  size_t n = 1;
  for (int64_t d : shape) n *= static_cast<size_t>(d);
  return n;
}

const Tensor* TensorFile::find(std::string_view name) const {
  for (const auto& t : tensors)
    if (t.name == name) return &t;
  return nullptr;
}

namespace {

void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

uint32_t get_u32(std::string_view bytes, size_t at) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<unsigned char>(bytes[at + i])) << (8 * i);
  return v;
}

}  // namespace

TensorFile canonicalize(TensorFile file) {
  std::sort(file.tensors.begin(), file.tensors.end(), [](const Tensor& a, const Tensor& b) { return a.name < b.name; });
  for (size_t i = 0; i < file.tensors.size(); ++i) {
    const Tensor& t = file.tensors[i];
    if (t.name.empty()) throw std::invalid_argument("tensor with an empty name");
    if (i > 0 && file.tensors[i - 1].name == t.name) throw std::invalid_argument("duplicate tensor '" + t.name + "'");
    for (int64_t d : t.shape)
      if (d < 0) throw std::invalid_argument("tensor '" + t.name + "' has a negative dimension");
    if (t.element_count() != t.data.size())
      throw std::invalid_argument("tensor '" + t.name + "' holds " + std::to_string(t.data.size()) +
                                  " values but its shape needs " + std::to_string(t.element_count()));
  }
  return file;
}

std::string serialize(const TensorFile& input) {
  const TensorFile file = canonicalize(input);
  json index = json::array();
  size_t offset = 0;
  for (const auto& t : file.tensors) {
    const size_t nbytes = 4 * t.data.size();
    index.push_back({{"name", t.name}, {"dtype", "f32"}, {"shape", t.shape}, {"offset", offset}, {"nbytes", nbytes}});
    offset += nbytes;
  }
  const std::string header = json{{"tensors", index}}.dump();
  std::string out(kMagic);
  put_u32(out, static_cast<uint32_t>(header.size()));
  out += header;
  out.reserve(out.size() + offset);
  for (const auto& t : file.tensors) {
    for (float f : t.data) put_u32(out, std::bit_cast<uint32_t>(f));
  }
  return out;
}

TensorFile deserialize(std::string_view bytes) {
  if (bytes.size() < kMagic.size() || bytes.substr(0, kMagic.size()) != kMagic)
    throw FormatError(Kind::bad_magic, "not a QTNSR1 file");
  if (bytes.size() < kMagic.size() + 4) throw FormatError(Kind::truncated, "file ends inside the header length");
  const size_t header_len = get_u32(bytes, kMagic.size());
  const size_t header_at = kMagic.size() + 4;
  if (bytes.size() - header_at < header_len) throw FormatError(Kind::truncated, "file ends inside the index");
  const std::string_view payload = bytes.substr(header_at + header_len);

  const json index = json::parse(bytes.substr(header_at, header_len), nullptr, false);
  if (index.is_discarded() || !index.is_object() || !index.contains("tensors") || !index["tensors"].is_array())
    throw FormatError(Kind::schema, "index is not a JSON object with a 'tensors' array");

  struct Span {
    size_t begin;
    size_t end;
    std::string name;
  };
  std::vector<Span> spans;
  std::set<std::string> names;
  TensorFile file;
  for (const auto& e : index["tensors"]) {
    Tensor t;
    size_t offset = 0;
    size_t nbytes = 0;
    try {
      t.name = e.at("name").get<std::string>();
      if (e.at("dtype").get<std::string>() != "f32")
        throw FormatError(Kind::schema, "tensor '" + t.name + "' has unsupported dtype " + e.at("dtype").dump());
      t.shape = e.at("shape").get<std::vector<int64_t>>();
      offset = e.at("offset").get<size_t>();
      nbytes = e.at("nbytes").get<size_t>();
    } catch (const json::exception& ex) {
      throw FormatError(Kind::schema, std::string("bad index entry: ") + ex.what());
    }
    for (int64_t d : t.shape)
      if (d < 0) throw FormatError(Kind::schema, "tensor '" + t.name + "' has a negative dimension");
    if (nbytes != 4 * t.element_count())
      throw FormatError(Kind::schema, "tensor '" + t.name + "' nbytes disagrees with its shape");
    if (!names.insert(t.name).second) throw FormatError(Kind::schema, "duplicate tensor '" + t.name + "'");
    if (offset > payload.size() || nbytes > payload.size() - offset)
      throw FormatError(Kind::bounds, "tensor '" + t.name + "' lies outside the payload");
    t.data.resize(t.element_count());
    for (size_t i = 0; i < t.data.size(); ++i) t.data[i] = std::bit_cast<float>(get_u32(payload, offset + 4 * i));
    spans.push_back({offset, offset + nbytes, t.name});
    file.tensors.push_back(std::move(t));
  }
  std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) { return a.begin < b.begin; });
  size_t reach = 0;
  const Span* widest = nullptr;
  for (const auto& sp : spans) {
    if (sp.begin == sp.end) continue;
    if (widest && sp.begin < reach)
      throw FormatError(Kind::overlap, "tensors '" + widest->name + "' and '" + sp.name + "' overlap");
    if (sp.end > reach) {
      reach = sp.end;
      widest = &sp;
    }
  }
  return file;
}

TensorFile read_tensor_file(const std::filesystem::path& path) { return deserialize(read_file(path)); }

void write_tensor_file(const std::filesystem::path& path, const TensorFile& file) {
  write_file_atomic(path, serialize(file));
}

}  // namespace qvf::merge
