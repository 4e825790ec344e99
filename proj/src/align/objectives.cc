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

#include "qvf/align/objectives.h"

#include <algorithm>
#include <cmath>

#include "grouping.h"

namespace qvf::align {

using nlohmann::json;

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be finite");
}

// -ln sigmoid(x) without overflow.
double neg_log_sigmoid(double x) { return std::max(-x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

}  // namespace

std::vector<double> grpo_advantages(const std::vector<double>& rewards, double eps) {
  if (rewards.size() < 2) throw std::invalid_argument("advantages need a group of at least 2");
  for (double r : rewards) require_finite(r, "reward");
  std::vector<double> out(rewards.size(), 0.0);
  if (std::all_of(rewards.begin(), rewards.end(), [&](double r) { return r == rewards.front(); })) return out;
  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= static_cast<double>(rewards.size());
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  const double sd = std::sqrt(var / static_cast<double>(rewards.size()));
  for (size_t i = 0; i < rewards.size(); ++i) out[i] = (rewards[i] - mean) / (sd + eps);
  return out;
}

double dpo_loss(double lp_chosen_pol, double lp_rejected_pol, double lp_chosen_ref, double lp_rejected_ref,
                const DpoConfig& cfg) {
  require_finite(lp_chosen_pol, "log-probability");
  require_finite(lp_rejected_pol, "log-probability");
  require_finite(lp_chosen_ref, "log-probability");
  require_finite(lp_rejected_ref, "log-probability");
  if (!(cfg.beta > 0.0) || !std::isfinite(cfg.beta)) throw std::invalid_argument("DPO beta must be positive");
  const double margin = (lp_chosen_pol - lp_chosen_ref) - (lp_rejected_pol - lp_rejected_ref);
  return neg_log_sigmoid(cfg.beta * margin);
}

double kl_estimator(double logp_new, double logp_ref) {
  const double d = logp_ref - logp_new;
  // expm1 keeps precision near zero, where the term is O(d^2).
  return std::expm1(d) - d;
}

double grpo_objective(const std::vector<double>& logp_new, const std::vector<double>& logp_old,
                      const std::vector<double>& logp_ref, const std::vector<double>& advantages,
                      const GrpoConfig& cfg) {
  const size_t n = logp_new.size();
  if (n == 0) throw std::invalid_argument("GRPO objective needs at least one token");
  if (logp_old.size() != n || logp_ref.size() != n || advantages.size() != n)
    throw std::invalid_argument("GRPO objective inputs differ in length");
  if (!(cfg.kl_beta >= 0.0)) throw std::invalid_argument("kl_beta must be non-negative");
  if (!(cfg.clip_eps > 0.0 && cfg.clip_eps < 1.0)) throw std::invalid_argument("clip_eps must lie in (0, 1)");
  double surrogate = 0.0;
  double kl = 0.0;
  for (size_t i = 0; i < n; ++i) {
    require_finite(logp_new[i], "logp_new");
    require_finite(logp_old[i], "logp_old");
    require_finite(logp_ref[i], "logp_ref");
    require_finite(advantages[i], "advantage");
    const double ratio = std::exp(logp_new[i] - logp_old[i]);
    const double clipped = std::clamp(ratio, 1.0 - cfg.clip_eps, 1.0 + cfg.clip_eps);
    surrogate += std::min(ratio * advantages[i], clipped * advantages[i]);
    kl += kl_estimator(logp_new[i], logp_ref[i]);
  }
  const double dn = static_cast<double>(n);
  return -surrogate / dn + cfg.kl_beta * kl / dn;
}

json to_json(const GrpoGroup& g) {
  return {{"schema", kGrpoSchema},
          {"prompt_id", g.prompt_id},
          {"completions", g.completions},
          {"rewards", g.rewards},
          {"advantages", g.advantages}};
}

std::vector<GrpoGroup> grpo_groups(const std::vector<sandbox::VerifiedSample>& samples, size_t group_size) {
  if (group_size < 2) throw std::invalid_argument("group_size must be at least 2");
  std::vector<GrpoGroup> out;
  for (const auto& group : detail::group_by_prompt(samples, group_size)) {
    if (group.samples.size() < 2) continue;
    GrpoGroup g;
    g.prompt_id = group.prompt_id;
    for (const auto* s : group.samples) {
      g.completions.push_back(s->completion);
      g.rewards.push_back(s->rewards.total);
    }
    g.advantages = grpo_advantages(g.rewards);
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace qvf::align
