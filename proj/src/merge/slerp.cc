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

#include "qvf/merge/slerp.h"

#include <algorithm>
#include <cmath>

namespace qvf::merge {

std::vector<float> slerp(const std::vector<float>& a, const std::vector<float>& b, const MergeConfig& cfg,
                         std::string* fallback_reason) {
  if (!(cfg.t >= 0.0 && cfg.t <= 1.0)) throw std::invalid_argument("merge t must lie in [0, 1]");
  if (!(cfg.parallel_threshold >= 0.0)) throw std::invalid_argument("parallel_threshold must be non-negative");
  if (a.size() != b.size()) throw std::invalid_argument("slerp: vectors differ in length");

  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  na = std::sqrt(na);
  nb = std::sqrt(nb);

  double wa = 1.0 - cfg.t;
  double wb = cfg.t;
  std::string reason;
  if (na == 0.0 || nb == 0.0) {
    reason = "zero_norm";
  } else {
    const double cos_omega = std::clamp(dot / (na * nb), -1.0, 1.0);
    if (1.0 - std::abs(cos_omega) < cfg.parallel_threshold) {
      reason = "parallel";
    } else {
      const double omega = std::acos(cos_omega);
      const double s = std::sin(omega);
      wa = std::sin((1.0 - cfg.t) * omega) / s;
      wb = std::sin(cfg.t * omega) / s;
    }
  }
  if (fallback_reason) *fallback_reason = reason;

  std::vector<float> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = static_cast<float>(wa * a[i] + wb * b[i]);
  return out;
}

MergeResult slerp_merge(const TensorFile& a_in, const TensorFile& b_in, const MergeConfig& cfg) {
  const TensorFile a = canonicalize(a_in);
  const TensorFile b = canonicalize(b_in);
  if (a.tensors.size() != b.tensors.size())
    throw std::invalid_argument("merge inputs hold " + std::to_string(a.tensors.size()) + " and " +
                                std::to_string(b.tensors.size()) + " tensors");
  MergeResult out;
  for (size_t i = 0; i < a.tensors.size(); ++i) {
    const Tensor& ta = a.tensors[i];
    const Tensor& tb = b.tensors[i];
    if (ta.name != tb.name) throw std::invalid_argument("merge inputs differ in tensor names: '" + ta.name + "' vs '" + tb.name + "'");
    if (ta.shape != tb.shape) throw std::invalid_argument("tensor '" + ta.name + "' differs in shape");
    std::string reason;
    out.file.tensors.push_back({ta.name, ta.shape, slerp(ta.data, tb.data, cfg, &reason)});
    if (!reason.empty()) out.linear_fallbacks.push_back({ta.name, reason});
  }
  return out;
}

}  // namespace qvf::merge
