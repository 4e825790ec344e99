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

#include "qvf/verify/reward.h"

#include <stdexcept>

#include "qvf/verify/completion.h"

namespace qvf::verify {

double quantum_reward(const TestReport& report) {
  if (report.execution_status != ExecutionStatus::ok) {
    return 0.0;
  }
  if (report.results.empty()) {
    throw std::invalid_argument("quantum reward needs at least one test result");
  }
  return static_cast<double>(report.passed()) / static_cast<double>(report.total());
}

double format_reward(std::string_view completion, FormatRewardMode mode) {
  const auto parts = split_completion(completion);
  const bool think_ok = parts.think.has_value();
  const bool code_ok = parts.fences.size() == 1 && !parts.unterminated_fence;
  if (mode == FormatRewardMode::binary) {
    return think_ok && code_ok ? 1.0 : 0.0;
  }
  return (think_ok ? 0.5 : 0.0) + (code_ok ? 0.5 : 0.0);
}

RewardBreakdown total_reward(double r_quantum, double r_format, const RewardWeights& weights) {
  if (weights.w_quantum < 0 || weights.w_format < 0) {
    throw std::invalid_argument("reward weights must be non-negative");
  }
  return {r_quantum, r_format, weights.w_quantum * r_quantum + weights.w_format * r_format};
}

}  // namespace qvf::verify
