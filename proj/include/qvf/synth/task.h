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
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qvf/common/rng.h"
#include "qvf/qlang/program.h"
#include "qvf/verify/assertion.h"

namespace qvf::synth {

inline constexpr std::string_view kTaskSchema = "task/1";

/// A template produced an inconsistent task, or a prompt slot was left open.
class TemplateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Prompt, reference solution and unit tests for one synthetic problem.
struct Task {
  std::string task_id;
  std::string prompt;
  qlang::Program reference;
  std::vector<verify::Assertion> assertions;
  std::string template_id;
  int template_version = 1;
  uint64_t seed = 0;
  bool requires_runtime = false;
  /// Slot values the prompt was filled from.
  nlohmann::json slots = nlohmann::json::object();
  /// Test payloads sent to the executor verbatim instead of the assertions,
  /// for dialects whose tests are opaque source (pyqiskit). Null otherwise.
  nlohmann::json raw_tests;
};

/// What an executor receives as the task's test list.
nlohmann::json exec_tests(const Task& t);

nlohmann::json to_json(const Task& t);
Task task_from_json(const nlohmann::json& j);

/// Interprets the reference and runs the assertions; throws TemplateError
/// unless every test passes.
void check_self_consistency(const Task& t);

struct SlotSpec {
  std::string name;
  std::string domain;
};

/// Seeded generator of prompt/test pairs. Subclasses own the slot domains,
/// the prompt wording and how references and assertions follow from slots.
class TemplateFamily {
 public:
  virtual ~TemplateFamily() = default;

  virtual std::string_view id() const = 0;
  virtual int version() const { return 1; }
  virtual bool requires_runtime() const = 0;
  /// Relative share of tasks in generate_dataset().
  virtual unsigned weight() const = 0;
  virtual std::vector<SlotSpec> slot_spec() const = 0;
  /// Prompt text with `{slot}` placeholders.
  virtual std::string_view prompt_template() const = 0;
  virtual nlohmann::json draw_slots(Rng& rng) const = 0;
  /// Adds slots derived from the drawn ones (phrases, joined lists).
  virtual nlohmann::json complete_slots(nlohmann::json slots) const { return slots; }
  virtual std::string reference(const nlohmann::json& slots) const = 0;
  virtual std::vector<verify::Assertion> assertions(const nlohmann::json& slots) const = 0;
};

/// Replaces every `{name}` with the slot value; throws on a missing slot.
std::string fill_prompt(std::string_view tmpl, const nlohmann::json& slots);

Task instantiate(const TemplateFamily& family, uint64_t seed, std::string task_id = "");
Task instantiate_with_slots(const TemplateFamily& family, const nlohmann::json& slots, uint64_t seed,
                            std::string task_id = "");

/// T1 circuit build + transpile, T2 random circuit + transpile,
/// T3 estimator over Pauli observables, T4 Bell/GHZ + sampler.
std::vector<std::unique_ptr<TemplateFamily>> builtin_families();

/// Smooth weighted round-robin over `families`; task i uses a seed derived
/// from (seed, i).
std::vector<Task> generate_dataset(const std::vector<const TemplateFamily*>& families, size_t count, uint64_t seed);

}  // namespace qvf::synth
