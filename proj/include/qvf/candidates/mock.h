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

#include <vector>

#include "qvf/candidates/candidate.h"
#include "qvf/common/rng.h"
#include "qvf/synth/task.h"

namespace qvf::candidates {

inline constexpr std::string_view kMockGeneratorId = "mock-mutation/1";

struct MutationPlan {
  std::vector<MutationOp> operators;
  uint64_t seed = 0;
};

struct MockOptions {
  double mutation_rate = 0.5;
  std::vector<MutationOp> allowed{std::begin(kAllMutationOps), std::end(kAllMutationOps)};
};

/// Applies `op` at a randomly chosen site. Returns false, leaving `statements`
/// untouched, when the program has no site for it.
bool apply_mutation(std::vector<qlang::Statement>& statements, MutationOp op, Rng& rng);

bool mutation_applicable(const std::vector<qlang::Statement>& statements, MutationOp op);

/// Wraps program source in a think stub and a qlang fence.
std::string format_completion(std::string_view source);

/// Deterministic in (task, req.seed, options); req.prompt is ignored.
std::vector<Candidate> mock_generate(const synth::Task& task, const GenerationRequest& req, const MockOptions& options);

}  // namespace qvf::candidates
