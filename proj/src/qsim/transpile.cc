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

#include "qvf/qsim/transpile.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace qvf::qsim {
namespace {

std::vector<int> shortest_path(const Backend& backend, int from, int to) {
  std::vector<int> parent(backend.num_qubits, -1);
  std::queue<int> frontier;
  frontier.push(from);
  parent[from] = from;
  while (!frontier.empty()) {
    int q = frontier.front();
    frontier.pop();
    if (q == to) {
      break;
    }
    for (int n : backend.neighbors(q)) {
      if (parent[n] < 0) {
        parent[n] = q;
        frontier.push(n);
      }
    }
  }
  if (parent[to] < 0) {
    throw CircuitError("no path between physical qubits on " + backend.id);
  }
  std::vector<int> path{to};
  while (path.back() != from) {
    path.push_back(parent[path.back()]);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

bool symmetric(Gate g) { return g == Gate::cz || g == Gate::swap; }

std::vector<int> op_qubits(const Op& op) {
  if (const auto* g = std::get_if<GateOp>(&op)) {
    return g->qubits;
  }
  return {std::get<MeasureOp>(op).qubit};
}

bool cancels(const Op& first, const Op& second) {
  const auto* a = std::get_if<GateOp>(&first);
  const auto* b = std::get_if<GateOp>(&second);
  if (a == nullptr || b == nullptr) {
    return false;
  }
  const GateOp inv = inverse(*a);
  if (inv.gate != b->gate) {
    return false;
  }
  bool same_qubits = inv.qubits == b->qubits;
  if (!same_qubits && symmetric(b->gate)) {
    same_qubits = inv.qubits.size() == 2 && inv.qubits[0] == b->qubits[1] && inv.qubits[1] == b->qubits[0];
  }
  if (!same_qubits) {
    return false;
  }
  if (inv.theta) {
    return std::abs(*inv.theta - *b->theta) <= 1e-12;
  }
  return true;
}

}  // namespace

std::vector<Op> cancel_inverse_pairs(const std::vector<Op>& ops) {
  // Stack discipline: each qubit remembers the index of the last live op
  // touching it. A new op cancels against the previous one only if that op
  // is the most recent on all of its qubits and acts on the same qubit set.
  std::vector<Op> out;
  std::vector<bool> alive;
  std::vector<std::vector<size_t>> last;  // per qubit, stack of live op indices
  auto ensure = [&](int q) {
    if (static_cast<size_t>(q) >= last.size()) {
      last.resize(q + 1);
    }
  };
  for (const auto& op : ops) {
    const auto qs = op_qubits(op);
    for (int q : qs) {
      ensure(q);
    }
    bool removed = false;
    if (!last[qs[0]].empty()) {
      const size_t prev = last[qs[0]].back();
      const auto prev_qs = op_qubits(out[prev]);
      std::vector<int> s1 = qs, s2 = prev_qs;
      std::sort(s1.begin(), s1.end());
      std::sort(s2.begin(), s2.end());
      bool top_on_all = s1 == s2 && std::all_of(qs.begin(), qs.end(), [&](int q) {
        return !last[q].empty() && last[q].back() == prev;
      });
      if (top_on_all && cancels(out[prev], op)) {
        alive[prev] = false;
        for (int q : qs) {
          last[q].pop_back();
        }
        removed = true;
      }
    }
    if (!removed) {
      out.push_back(op);
      alive.push_back(true);
      for (int q : qs) {
        last[q].push_back(out.size() - 1);
      }
    }
  }
  std::vector<Op> result;
  for (size_t i = 0; i < out.size(); ++i) {
    if (alive[i]) {
      result.push_back(out[i]);
    }
  }
  return result;
}

bool respects_coupling(const Circuit& circuit, const Backend& backend) {
  for (const auto& op : circuit.ops()) {
    if (const auto* g = std::get_if<GateOp>(&op); g && g->qubits.size() == 2) {
      if (!backend.coupled(g->qubits[0], g->qubits[1])) {
        return false;
      }
    }
  }
  return true;
}

RoutedCircuit transpile(const Circuit& circuit, const Backend& backend, int level) {
  if (level < 0 || level > 3) {
    throw CircuitError("optimization level must be in 0..3");
  }
  if (circuit.num_qubits() > backend.num_qubits) {
    throw CircuitError("circuit " + circuit.name() + " has " + std::to_string(circuit.num_qubits()) +
                       " qubits but backend " + backend.id + " only " + std::to_string(backend.num_qubits));
  }
  backend.validate();

  // Trivial initial layout; virtual v starts on physical v.
  std::vector<int> v2p(backend.num_qubits);
  std::iota(v2p.begin(), v2p.end(), 0);
  std::vector<int> p2v = v2p;

  std::vector<Op> routed;
  auto physical_swap = [&](int pa, int pb) {
    routed.emplace_back(GateOp{Gate::swap, {pa, pb}, std::nullopt});
    std::swap(p2v[pa], p2v[pb]);
    v2p[p2v[pa]] = pa;
    v2p[p2v[pb]] = pb;
  };

  for (const auto& op : circuit.ops()) {
    if (const auto* m = std::get_if<MeasureOp>(&op)) {
      routed.emplace_back(MeasureOp{v2p[m->qubit], m->clbit});
      continue;
    }
    GateOp g = std::get<GateOp>(op);
    if (g.qubits.size() == 2) {
      const int target = v2p[g.qubits[1]];
      if (!backend.coupled(v2p[g.qubits[0]], target)) {
        const auto path = shortest_path(backend, v2p[g.qubits[0]], target);
        // Walk the first operand along the path until it neighbors the second.
        for (size_t i = 0; i + 2 < path.size(); ++i) {
          physical_swap(path[i], path[i + 1]);
        }
      }
    }
    for (int& q : g.qubits) {
      q = v2p[q];
    }
    routed.emplace_back(std::move(g));
  }

  if (level >= 1) {
    routed = cancel_inverse_pairs(routed);
  }

  Circuit out(circuit.name(), backend.num_qubits, circuit.num_clbits());
  for (const auto& op : routed) {
    out.append(op);
  }
  return RoutedCircuit{std::move(out), std::move(v2p), level, backend.id};
}

Statevector unpermute(const Statevector& routed_state, const std::vector<int>& final_layout, int num_logical) {
  const int width = static_cast<int>(final_layout.size());
  if ((size_t{1} << width) != routed_state.size()) {
    throw CircuitError("layout width does not match the routed state");
  }
  Statevector logical(size_t{1} << num_logical, Amplitude{0.0, 0.0});
  for (size_t phys = 0; phys < routed_state.size(); ++phys) {
    size_t virt = 0;
    for (int v = 0; v < width; ++v) {
      if ((phys >> final_layout[v]) & 1) {
        virt |= size_t{1} << v;
      }
    }
    if ((virt >> num_logical) != 0) {
      if (std::abs(routed_state[phys]) > 1e-9) {
        throw CircuitError("ancilla qubit left excited after routing");
      }
      continue;
    }
    logical[virt] = routed_state[phys];
  }
  return logical;
}

}  // namespace qvf::qsim
