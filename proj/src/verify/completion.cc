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

#include "qvf/verify/completion.h"

namespace qvf::verify {
namespace {

constexpr std::string_view kOpen = "<think>";
constexpr std::string_view kClose = "</think>";

bool is_fence_line(std::string_view line) {
  size_t i = line.find_first_not_of(" \t");
  return i != std::string_view::npos && line.substr(i, 3) == "```";
}

}  // namespace

CompletionParts split_completion(std::string_view completion) {
  CompletionParts parts;
  std::string_view body = completion;

  const size_t start = completion.find_first_not_of(" \t\r\n");
  if (start != std::string_view::npos && completion.substr(start, kOpen.size()) == kOpen) {
    const size_t content = start + kOpen.size();
    const size_t close = completion.find(kClose, content);
    if (close != std::string_view::npos) {
      const std::string_view inner = completion.substr(content, close - content);
      const std::string_view rest = completion.substr(close + kClose.size());
      const bool single = inner.find(kOpen) == std::string_view::npos && rest.find(kOpen) == std::string_view::npos &&
                          rest.find(kClose) == std::string_view::npos;
      if (single) {
        parts.think = std::string(inner);
        body = rest;
      }
    }
  }
  parts.body = std::string(body);

  bool open = false;
  std::string current;
  size_t pos = 0;
  while (pos < body.size()) {
    size_t end = body.find('\n', pos);
    if (end == std::string_view::npos) end = body.size();
    std::string_view line = body.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (is_fence_line(line)) {
      if (open) {
        parts.fences.push_back(std::move(current));
        current.clear();
      }
      open = !open;
    } else if (open) {
      current.append(line);
      current.push_back('\n');
    }
    pos = end + 1;
  }
  parts.unterminated_fence = open;
  return parts;
}

}  // namespace qvf::verify
