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

#include "qvf/synth/task.h"

#include <fmt/format.h>

#include "qvf/qlang/interpreter.h"
#include "qvf/verify/report.h"

namespace qvf::synth {

using nlohmann::json;

json exec_tests(const Task& t) { return t.raw_tests.is_null() ? verify::to_json(t.assertions) : t.raw_tests; }

json to_json(const Task& t) {
  json j = {{"schema", std::string(kTaskSchema)},
          {"task_id", t.task_id},
          {"template_id", t.template_id},
          {"template_version", t.template_version},
          {"seed", t.seed},
          {"dialect", std::string(qlang::dialect_name(t.reference.dialect))},
          {"requires_runtime", t.requires_runtime},
          {"prompt", t.prompt},
          {"reference", t.reference.source},
          {"slots", t.slots},
          {"assertions", verify::to_json(t.assertions)}};
  if (!t.raw_tests.is_null()) j["raw_tests"] = t.raw_tests;
  return j;
}

Task task_from_json(const json& j) {
  try {
    if (j.at("schema").get<std::string>() != kTaskSchema) {
      throw std::invalid_argument("unsupported task schema " + j.at("schema").get<std::string>());
    }
    Task t;
    t.task_id = j.at("task_id").get<std::string>();
    t.template_id = j.at("template_id").get<std::string>();
    t.template_version = j.at("template_version").get<int>();
    t.seed = j.at("seed").get<uint64_t>();
    t.requires_runtime = j.at("requires_runtime").get<bool>();
    t.prompt = j.at("prompt").get<std::string>();
    t.slots = j.value("slots", json::object());
    const auto dialect = qlang::parse_dialect(j.at("dialect").get<std::string>());
    const auto source = j.at("reference").get<std::string>();
    if (dialect == qlang::Dialect::qlang) {
      t.reference = qlang::parse(source);
    } else {
      t.reference = qlang::Program{dialect, source, {}};
    }
    t.assertions = verify::assertions_from_json(j.at("assertions"));
    if (auto it = j.find("raw_tests"); it != j.end() && !it->is_null()) {
      if (!it->is_array()) throw std::invalid_argument("task raw_tests must be an array");
      t.raw_tests = *it;
    }
    return t;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed task record: ") + e.what());
  }
}

void check_self_consistency(const Task& t) {
  const auto env = qlang::interpret(t.reference);
  const auto report = verify::run_assertions(env, t.assertions);
  for (const auto& r : report.results) {
    if (!r.passed) {
      throw TemplateError(fmt::format("template {} seed {}: reference fails {} ({})", t.template_id, t.seed, r.name,
                                      r.message));
    }
  }
  if (report.results.empty()) {
    throw TemplateError("template " + t.template_id + " produced no assertions");
  }
}

std::string fill_prompt(std::string_view tmpl, const json& slots) {
  std::string out;
  size_t pos = 0;
  while (pos < tmpl.size()) {
    const size_t open = tmpl.find('{', pos);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(pos));
      break;
    }
    const size_t close = tmpl.find('}', open);
    if (close == std::string_view::npos) {
      throw TemplateError("unterminated slot in prompt template");
    }
    out.append(tmpl.substr(pos, open - pos));
    const std::string key(tmpl.substr(open + 1, close - open - 1));
    if (!slots.contains(key)) {
      throw TemplateError("prompt slot {" + key + "} has no value");
    }
    const auto& v = slots.at(key);
    out += v.is_string() ? v.get<std::string>() : v.dump();
    pos = close + 1;
  }
  return out;
}

Task instantiate_with_slots(const TemplateFamily& family, const json& drawn, uint64_t seed, std::string task_id) {
  const json slots = family.complete_slots(drawn);
  Task t;
  t.template_id = std::string(family.id());
  t.template_version = family.version();
  t.seed = seed;
  t.task_id = task_id.empty() ? fmt::format("{}-s{}", family.id(), seed) : std::move(task_id);
  t.requires_runtime = family.requires_runtime();
  t.slots = slots;
  t.prompt = fill_prompt(family.prompt_template(), slots);
  t.reference = qlang::parse(family.reference(slots));
  t.assertions = family.assertions(slots);
  check_self_consistency(t);
  return t;
}

Task instantiate(const TemplateFamily& family, uint64_t seed, std::string task_id) {
  Rng rng(seed);
  return instantiate_with_slots(family, family.draw_slots(rng), seed, std::move(task_id));
}

std::vector<Task> generate_dataset(const std::vector<const TemplateFamily*>& families, size_t count, uint64_t seed) {
  if (families.empty()) {
    throw std::invalid_argument("generate_dataset needs at least one template family");
  }
  if (count < 1) {
    throw std::invalid_argument("generate_dataset needs count >= 1");
  }
  long total_weight = 0;
  for (const auto* f : families) total_weight += static_cast<long>(f->weight());
  std::vector<long> current(families.size(), 0);

  std::vector<Task> tasks;
  tasks.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    size_t pick = 0;
    for (size_t k = 0; k < families.size(); ++k) {
      current[k] += static_cast<long>(families[k]->weight());
      if (current[k] > current[pick]) pick = k;
    }
    current[pick] -= total_weight;
    tasks.push_back(instantiate(*families[pick], derive_seed(seed, i), fmt::format("task-{:05}", i)));
  }
  return tasks;
}

}  // namespace qvf::synth
