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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qvf/qlang/program.h"

namespace qvf::candidates {

inline constexpr std::string_view kCandidateSchema = "candidate/1";

struct GenerationRequest {
  std::string prompt;
  int n = 16;
  double temperature = 1.0;
  int max_tokens = 1024;
  uint64_t seed = 0;

  /// Throws std::invalid_argument when n < 1, temperature < 0 or max_tokens < 1.
  void validate() const;
};

enum class MutationOp { perturb_angle, swap_qubits, substitute_gate, delete_statement, rename_binding, change_level };

inline constexpr MutationOp kAllMutationOps[] = {MutationOp::perturb_angle,    MutationOp::swap_qubits,
                                                 MutationOp::substitute_gate,  MutationOp::delete_statement,
                                                 MutationOp::rename_binding,   MutationOp::change_level};

/// "M1".."M6".
std::string_view mutation_code(MutationOp op);
std::string_view mutation_name(MutationOp op);
/// Accepts either the code or the long name.
MutationOp parse_mutation(std::string_view text);

struct Extraction {
  std::string source;
  /// No code fence was found and the whole remainder was taken.
  bool fenceless = false;
  size_t fence_count = 0;
  bool had_think = false;
};

class ExtractionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Source is trimmed and newline-terminated. Throws ExtractionError when nothing is left.
Extraction extract_program(std::string_view completion);

struct Candidate {
  std::string candidate_id;
  std::string task_id;
  int index = 0;
  std::string completion;
  /// Extracted program source; empty when `unparseable`.
  std::string program;
  qlang::Dialect dialect = qlang::Dialect::qlang;
  bool unparseable = false;
  bool fenceless = false;
  size_t fence_count = 0;
  std::string generator_id;
  uint64_t seed = 0;
  std::vector<MutationOp> mutations;

  bool mutated() const { return !mutations.empty(); }
};

/// Runs extraction on `completion` and records the outcome on the candidate.
Candidate make_candidate(std::string task_id, int index, std::string completion, std::string generator_id,
                         uint64_t seed, qlang::Dialect dialect = qlang::Dialect::qlang);

nlohmann::json to_json(const Candidate& c);
Candidate candidate_from_json(const nlohmann::json& j);

}  // namespace qvf::candidates
