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

#include "qvf/merge/tensor_file.h"

namespace qvf::merge {

struct MergeConfig {
  double t = 0.5;
  /// Below this 1 - |cos| the tensors count as parallel and are lerped.
  double parallel_threshold = 1e-7;
};

struct MergeNote {
  std::string tensor;
  /// "parallel" or "zero_norm".
  std::string reason;
};

struct MergeResult {
  TensorFile file;
  /// Tensors that fell back to linear interpolation.
  std::vector<MergeNote> linear_fallbacks;
};

/// SLERP of each tensor pair, treating every tensor as one flat vector.
std::vector<float> slerp(const std::vector<float>& a, const std::vector<float>& b, const MergeConfig& cfg,
                         std::string* fallback_reason = nullptr);

/// Throws std::invalid_argument on mismatched names or shapes.
MergeResult slerp_merge(const TensorFile& a, const TensorFile& b, const MergeConfig& cfg);

}  // namespace qvf::merge
