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

#include <string_view>

#include "qvf/verify/report.h"

namespace qvf::verify {

struct RewardWeights {
  double w_quantum = 1.0;
  double w_format = 0.1;
};

struct RewardBreakdown {
  double r_quantum = 0.0;
  double r_format = 0.0;
  double total = 0.0;
};

/// Graded: 0.5 for the think block plus 0.5 for the code block.
/// Binary: 1 only when both are present.
enum class FormatRewardMode { graded, binary };

/// Fraction of passing tests; 0 when the program did not execute cleanly.
double quantum_reward(const TestReport& report);

double format_reward(std::string_view completion, FormatRewardMode mode = FormatRewardMode::graded);

RewardBreakdown total_reward(double r_quantum, double r_format, const RewardWeights& weights = {});

}  // namespace qvf::verify
