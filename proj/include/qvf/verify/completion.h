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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qvf::verify {

/// Structure of a model completion: an optional leading reasoning block
/// followed by prose and fenced code.
struct CompletionParts {
  /// Content of the leading <think> block when it is the only one.
  std::optional<std::string> think;
  /// Everything after the think block (or the whole text without one).
  std::string body;
  /// Contents of complete ``` blocks in `body`, in order.
  std::vector<std::string> fences;
  /// A fence was opened but never closed.
  bool unterminated_fence = false;
};

CompletionParts split_completion(std::string_view completion);

}  // namespace qvf::verify
