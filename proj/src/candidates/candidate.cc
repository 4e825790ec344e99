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

#include "qvf/candidates/candidate.h"

#include "qvf/verify/completion.h"

namespace qvf::candidates {

using nlohmann::json;

void GenerationRequest::validate() const {
  if (n < 1) throw std::invalid_argument("generation request: n must be at least 1");
  if (!(temperature >= 0.0)) throw std::invalid_argument("generation request: temperature must be non-negative");
  if (max_tokens < 1) throw std::invalid_argument("generation request: max_tokens must be positive");
}

std::string_view mutation_code(MutationOp op) {
  switch (op) {
    case MutationOp::perturb_angle: return "M1";
    case MutationOp::swap_qubits: return "M2";
    case MutationOp::substitute_gate: return "M3";
    case MutationOp::delete_statement: return "M4";
    case MutationOp::rename_binding: return "M5";
    case MutationOp::change_level: return "M6";
  }
  return "?";
}

std::string_view mutation_name(MutationOp op) {
  switch (op) {
    case MutationOp::perturb_angle: return "perturb_angle";
    case MutationOp::swap_qubits: return "swap_qubits";
    case MutationOp::substitute_gate: return "substitute_gate";
    case MutationOp::delete_statement: return "delete_statement";
    case MutationOp::rename_binding: return "rename_binding";
    case MutationOp::change_level: return "change_level";
  }
  return "?";
}

MutationOp parse_mutation(std::string_view text) {
  for (MutationOp op : kAllMutationOps) {
    if (text == mutation_code(op) || text == mutation_name(op)) return op;
  }
  throw std::invalid_argument("unknown mutation operator '" + std::string(text) + "'");
}

namespace {

std::string_view trim(std::string_view s) {
  const size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Text after the first fence line, for a fence that never closes.
std::string_view after_open_fence(std::string_view body) {
  size_t pos = 0;
  while (pos < body.size()) {
    size_t end = body.find('\n', pos);
    if (end == std::string_view::npos) end = body.size();
    std::string_view line = trim(body.substr(pos, end - pos));
    if (line.substr(0, 3) == "```") return end < body.size() ? body.substr(end + 1) : std::string_view{};
    pos = end + 1;
  }
  return body;
}

}  // namespace

Extraction extract_program(std::string_view completion) {
  const verify::CompletionParts parts = verify::split_completion(completion);
  Extraction out;
  out.had_think = parts.think.has_value();
  out.fence_count = parts.fences.size();
  std::string_view source;
  if (!parts.fences.empty()) {
    source = parts.fences.front();
  } else {
    out.fenceless = true;
    source = parts.unterminated_fence ? after_open_fence(parts.body) : std::string_view(parts.body);
  }
  source = trim(source);
  if (source.empty()) throw ExtractionError("completion contains no program source");
  out.source = std::string(source);
  out.source.push_back('\n');
  return out;
}

Candidate make_candidate(std::string task_id, int index, std::string completion, std::string generator_id,
                         uint64_t seed, qlang::Dialect dialect) {
  Candidate c;
  c.candidate_id = task_id + "/c" + (index < 10 ? "0" : "") + std::to_string(index);
  c.task_id = std::move(task_id);
  c.index = index;
  c.completion = std::move(completion);
  c.dialect = dialect;
  c.generator_id = std::move(generator_id);
  c.seed = seed;
  try {
    Extraction e = extract_program(c.completion);
    c.program = std::move(e.source);
    c.fenceless = e.fenceless;
    c.fence_count = e.fence_count;
  } catch (const ExtractionError&) {
    c.unparseable = true;
  }
  return c;
}

json to_json(const Candidate& c) {
  json mutations = json::array();
  for (MutationOp op : c.mutations) mutations.push_back(mutation_code(op));
  return {{"schema", kCandidateSchema},
          {"candidate_id", c.candidate_id},
          {"task_id", c.task_id},
          {"index", c.index},
          {"completion", c.completion},
          {"program", c.program},
          {"dialect", qlang::dialect_name(c.dialect)},
          {"unparseable", c.unparseable},
          {"fenceless", c.fenceless},
          {"fence_count", c.fence_count},
          {"generator_id", c.generator_id},
          {"seed", c.seed},
          {"mutations", std::move(mutations)}};
}

Candidate candidate_from_json(const json& j) {
  try {
    if (j.at("schema").get<std::string>() != kCandidateSchema)
      throw std::invalid_argument("candidate: unsupported schema " + j.at("schema").dump());
    Candidate c;
    c.candidate_id = j.at("candidate_id").get<std::string>();
    c.task_id = j.at("task_id").get<std::string>();
    c.index = j.at("index").get<int>();
    c.completion = j.at("completion").get<std::string>();
    c.program = j.at("program").get<std::string>();
    c.dialect = qlang::parse_dialect(j.at("dialect").get<std::string>());
    c.unparseable = j.at("unparseable").get<bool>();
    c.fenceless = j.value("fenceless", false);
    c.fence_count = j.value("fence_count", size_t{0});
    c.generator_id = j.at("generator_id").get<std::string>();
    c.seed = j.at("seed").get<uint64_t>();
    for (const auto& m : j.value("mutations", json::array())) c.mutations.push_back(parse_mutation(m.get<std::string>()));
    return c;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("candidate: ") + e.what());
  }
}

}  // namespace qvf::candidates
