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

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qvf/qsim/circuit.h"

namespace qvf::qsim {

class UnknownBackendError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A fake device: qubit count plus an undirected coupling graph.
struct Backend {
  std::string id;
  int num_qubits = 0;
  /// Undirected edges stored as (min, max).
  std::set<std::pair<int, int>> coupling_map;
  std::set<Gate> basis_gates;

  bool coupled(int a, int b) const;
  std::vector<int> neighbors(int q) const;
  bool is_connected() const;
  /// Throws CircuitError when an invariant does not hold.
  void validate() const;

  bool operator==(const Backend&) const = default;
};

Backend make_backend(std::string id, int num_qubits, const std::vector<std::pair<int, int>>& edges);

/// Built-in devices: line5, tee5, ring8.
const std::vector<Backend>& backend_registry();
const Backend& find_backend(std::string_view id);

}  // namespace qvf::qsim
