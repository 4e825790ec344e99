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

#include "json.hpp"
#include "qvf/sandbox/batch.h"

namespace qvf::align {

inline constexpr std::string_view kGrpoSchema = "grpo/1";
inline constexpr double kAdvantageEps = 1e-6;

struct DpoConfig {
  double beta = 0.2;
};

struct GrpoConfig {
  double kl_beta = 0.01;
  double clip_eps = 0.2;
};

/// (r_i - mean) / (population std + eps). Constant groups give exact zeros.
std::vector<double> grpo_advantages(const std::vector<double>& rewards, double eps = kAdvantageEps);

/// -ln sigmoid(beta * ((lp_c_pol - lp_c_ref) - (lp_r_pol - lp_r_ref))).
double dpo_loss(double lp_chosen_pol, double lp_rejected_pol, double lp_chosen_ref, double lp_rejected_ref,
                const DpoConfig& cfg = {});

/// exp(ref - new) - (ref - new) - 1; never negative.
double kl_estimator(double logp_new, double logp_ref);

/// Clipped surrogate plus KL penalty, negated so that lower is better.
double grpo_objective(const std::vector<double>& logp_new, const std::vector<double>& logp_old,
                      const std::vector<double>& logp_ref, const std::vector<double>& advantages,
                      const GrpoConfig& cfg = {});

struct GrpoGroup {
  std::string prompt_id;
  std::vector<std::string> completions;
  std::vector<double> rewards;
  std::vector<double> advantages;
};

nlohmann::json to_json(const GrpoGroup& g);

/// One group per prompt from the first `group_size` candidates by index,
/// using each sample's total reward. Prompts with fewer than two samples are skipped.
std::vector<GrpoGroup> grpo_groups(const std::vector<sandbox::VerifiedSample>& samples, size_t group_size = 32);

}  // namespace qvf::align
