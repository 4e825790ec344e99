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

#include "qvf/qsim/backend.h"

#include <algorithm>
#include <queue>

namespace qvf::qsim {

bool Backend::coupled(int a, int b) const {
  return coupling_map.count({std::min(a, b), std::max(a, b)}) > 0;
}

std::vector<int> Backend::neighbors(int q) const {
  std::vector<int> out;
  for (const auto& [a, b] : coupling_map) {
    if (a == q) {
      out.push_back(b);
    } else if (b == q) {
      out.push_back(a);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Backend::is_connected() const {
  if (num_qubits <= 1) {
    return num_qubits == 1;
  }
  std::vector<bool> seen(num_qubits, false);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = true;
  int reached = 1;
  while (!frontier.empty()) {
    int q = frontier.front();
    frontier.pop();
    for (int n : neighbors(q)) {
      if (!seen[n]) {
        seen[n] = true;
        ++reached;
        frontier.push(n);
      }
    }
  }
  return reached == num_qubits;
}

void Backend::validate() const {
  if (num_qubits < 1) {
    throw CircuitError("backend " + id + " has no qubits");
  }
  for (const auto& [a, b] : coupling_map) {
    if (a < 0 || b >= num_qubits || a >= b) {
      throw CircuitError("backend " + id + " has an invalid coupling edge");
    }
  }
  if (!is_connected()) {
    throw CircuitError("backend " + id + " has a disconnected coupling graph");
  }
}

Backend make_backend(std::string id, int num_qubits, const std::vector<std::pair<int, int>>& edges) {
  Backend b;
  b.id = std::move(id);
  b.num_qubits = num_qubits;
  for (auto [x, y] : edges) {
    b.coupling_map.insert({std::min(x, y), std::max(x, y)});
  }
  b.basis_gates.insert(std::begin(kAllGates), std::end(kAllGates));
  return b;
}

const std::vector<Backend>& backend_registry() {
  static const std::vector<Backend> registry = [] {
    std::vector<Backend> r;
    r.push_back(make_backend("line5", 5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}));
    r.push_back(make_backend("tee5", 5, {{0, 1}, {1, 2}, {1, 3}, {3, 4}}));
    std::vector<std::pair<int, int>> ring;
    for (int q = 0; q < 8; ++q) {
      ring.emplace_back(q, (q + 1) % 8);
    }
    r.push_back(make_backend("ring8", 8, ring));
    return r;
  }();
  return registry;
}

const Backend& find_backend(std::string_view id) {
  for (const auto& b : backend_registry()) {
    if (b.id == id) {
      return b;
    }
  }
  throw UnknownBackendError("unknown backend '" + std::string(id) + "'");
}

}  // namespace qvf::qsim
