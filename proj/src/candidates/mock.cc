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

#include "qvf/candidates/mock.h"

#include <algorithm>
#include <set>

#include "qvf/common/hash.h"

namespace qvf::candidates {

using qlang::Statement;

namespace {

using Sites = std::vector<size_t>;

template <class Pred>
Sites sites_where(const std::vector<Statement>& statements, Pred pred) {
  Sites out;
  for (size_t i = 0; i < statements.size(); ++i)
    if (pred(statements[i])) out.push_back(i);
  return out;
}

bool has_nonzero_theta(const Statement& s) {
  const auto* g = std::get_if<qlang::GateStmt>(&s.body);
  return g && g->theta && g->theta->value != 0.0;
}

bool is_two_qubit_gate(const Statement& s) {
  const auto* g = std::get_if<qlang::GateStmt>(&s.body);
  return g && g->qubits.size() == 2;
}

bool is_gate(const Statement& s) { return std::holds_alternative<qlang::GateStmt>(s.body); }

bool is_binding(const Statement& s) { return qlang::bound_name(s).has_value(); }

bool is_transpile(const Statement& s) { return std::holds_alternative<qlang::TranspileStmt>(s.body); }

Sites sites_for(const std::vector<Statement>& statements, MutationOp op) {
  switch (op) {
    case MutationOp::perturb_angle: return sites_where(statements, has_nonzero_theta);
    case MutationOp::swap_qubits: return sites_where(statements, is_two_qubit_gate);
    case MutationOp::substitute_gate: return sites_where(statements, is_gate);
    case MutationOp::delete_statement: return sites_where(statements, [](const Statement&) { return true; });
    case MutationOp::rename_binding: return sites_where(statements, is_binding);
    case MutationOp::change_level: return sites_where(statements, is_transpile);
  }
  return {};
}

std::vector<qsim::Gate> same_shape_gates(qsim::Gate g) {
  std::vector<qsim::Gate> out;
  for (qsim::Gate other : qsim::kAllGates) {
    if (other != g && qsim::gate_arity(other) == qsim::gate_arity(g) &&
        qsim::gate_is_parametric(other) == qsim::gate_is_parametric(g))
      out.push_back(other);
  }
  return out;
}

std::string fresh_name(const std::vector<Statement>& statements, const std::string& base) {
  std::set<std::string> used;
  for (const auto& s : statements) {
    if (auto b = qlang::bound_name(s)) used.insert(*b);
    for (auto& r : qlang::referenced_names(s)) used.insert(r);
  }
  for (int k = 1;; ++k) {
    std::string name = base + "_" + std::to_string(k);
    if (!used.count(name)) return name;
  }
}

}  // namespace

bool mutation_applicable(const std::vector<Statement>& statements, MutationOp op) {
  return !sites_for(statements, op).empty();
}

bool apply_mutation(std::vector<Statement>& statements, MutationOp op, Rng& rng) {
  const Sites sites = sites_for(statements, op);
  if (sites.empty()) return false;
  const size_t at = rng.pick(sites);
  Statement& s = statements[at];
  switch (op) {
    case MutationOp::perturb_angle: {
      auto& g = std::get<qlang::GateStmt>(s.body);
      const double factor = rng.bernoulli(0.5) ? 0.5 : 2.0;
      g.theta = qlang::Angle::from_value(g.theta->value * factor);
      break;
    }
    case MutationOp::swap_qubits: {
      auto& g = std::get<qlang::GateStmt>(s.body);
      std::swap(g.qubits[0], g.qubits[1]);
      break;
    }
    case MutationOp::substitute_gate: {
      auto& g = std::get<qlang::GateStmt>(s.body);
      g.gate = rng.pick(same_shape_gates(g.gate));
      break;
    }
    case MutationOp::delete_statement:
      statements.erase(statements.begin() + static_cast<std::ptrdiff_t>(at));
      break;
    case MutationOp::rename_binding: {
      const std::string from = *qlang::bound_name(s);
      const std::string to = fresh_name(statements, from);
      for (auto& st : statements) qlang::rename_binding(st, from, to);
      break;
    }
    case MutationOp::change_level: {
      auto& t = std::get<qlang::TranspileStmt>(s.body);
      std::vector<int> levels;
      for (int l = 0; l <= 3; ++l)
        if (l != t.level) levels.push_back(l);
      t.level = rng.pick(levels);
      break;
    }
  }
  return true;
}

std::string format_completion(std::string_view source) {
  std::string out = "<think>\nRestate the request, then write the program.\n</think>\n```qlang\n";
  out.append(source);
  if (!source.empty() && source.back() != '\n') out.push_back('\n');
  out.append("```\n");
  return out;
}

std::vector<Candidate> mock_generate(const synth::Task& task, const GenerationRequest& req,
                                     const MockOptions& options) {
  req.validate();
  if (!(options.mutation_rate >= 0.0 && options.mutation_rate <= 1.0))
    throw std::invalid_argument("mutation_rate must lie in [0, 1]");
  if (options.mutation_rate > 0.0 && options.allowed.empty())
    throw std::invalid_argument("no mutation operators allowed");

  const uint64_t base = derive_seed(req.seed, fnv1a64(task.task_id));
  std::vector<Candidate> out;
  out.reserve(static_cast<size_t>(req.n));
  for (int i = 0; i < req.n; ++i) {
    const uint64_t seed = derive_seed(base, static_cast<uint64_t>(i));
    Rng rng(seed);
    MutationPlan plan{{}, seed};
    std::string source = task.reference.source;
    if (rng.bernoulli(options.mutation_rate)) {
      std::vector<Statement> statements = task.reference.statements;
      const int wanted = 1 + static_cast<int>(rng.below(2));
      std::vector<MutationOp> pool = options.allowed;
      for (int k = 0; k < wanted; ++k) {
        std::vector<MutationOp> usable;
        for (MutationOp op : pool)
          if (mutation_applicable(statements, op)) usable.push_back(op);
        if (usable.empty()) break;
        const MutationOp op = rng.pick(usable);
        apply_mutation(statements, op, rng);
        plan.operators.push_back(op);
        pool.erase(std::find(pool.begin(), pool.end(), op));
      }
      if (!plan.operators.empty()) source = qlang::render(statements);
    }
    Candidate c = make_candidate(task.task_id, i, format_completion(source), std::string(kMockGeneratorId), seed,
                                 task.reference.dialect);
    c.mutations = std::move(plan.operators);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace qvf::candidates
