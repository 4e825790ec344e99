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

#include <stdexcept>
#include <vector>

#include "qvf/synth/task.h"

namespace qvf::testing {

/// The controlled-rx transpile task from the worked example in the README.
inline synth::Task appendix_task() {
  nlohmann::json slots = {{"name", "qc"},      {"n", 2},          {"gate", "crx"},
                          {"a", 0},            {"b", 1},          {"theta", "0.75"},
                          {"backend", "line5"}, {"backend_var", "backend"}, {"level", 1},
                          {"out", "pm_circ"}};
  for (const auto& f : synth::builtin_families())
    if (f->id() == "T1") return synth::instantiate_with_slots(*f, slots, 0, "appendix");
  throw std::logic_error("T1 missing");
}

inline std::vector<synth::Task> dataset(size_t n, uint64_t seed) {
  auto fs = synth::builtin_families();
  std::vector<const synth::TemplateFamily*> raw;
  for (const auto& f : fs) raw.push_back(f.get());
  return synth::generate_dataset(raw, n, seed);
}

}  // namespace qvf::testing
