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

#include "qvf/qlang/interpreter.h"

namespace qvf::qlang {

std::string_view value_kind(const Value& v) {
  static constexpr std::string_view kNames[] = {"circuit", "backend", "observable", "job", "routed"};
  return kNames[v.index()];
}

void Env::bind(const std::string& name, Value value) {
  if (!bindings_.emplace(name, std::move(value)).second) {
    throw std::invalid_argument("name '" + name + "' is already bound");
  }
}

const Value* Env::find(const std::string& name) const {
  auto it = bindings_.find(name);
  return it == bindings_.end() ? nullptr : &it->second;
}

Value* Env::find_mutable(const std::string& name) {
  auto it = bindings_.find(name);
  return it == bindings_.end() ? nullptr : &it->second;
}

class Interpreter {
 public:
  Interpreter(Env& env, const Deadline& deadline) : env_(env), deadline_(deadline) {}

  void run(const Statement& s) {
    line_ = s.line;
    std::visit([this](const auto& body) { exec(body); }, s.body);
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw RuntimeError(line_, msg); }

  template <class T>
  T& lookup(const std::string& name, std::string_view kind) {
    Value* v = env_.find_mutable(name);
    if (v == nullptr) {
      fail("unknown name '" + name + "'");
    }
    T* typed = std::get_if<T>(v);
    if (typed == nullptr) {
      fail("'" + name + "' is a " + std::string(value_kind(*v)) + ", expected a " + std::string(kind));
    }
    return *typed;
  }

  void bind(const std::string& name, Value value) {
    try {
      env_.bind(name, std::move(value));
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }

  void exec(const CircuitDecl& s) { bind(s.name, qsim::Circuit(s.name, s.num_qubits, s.num_clbits)); }

  void exec(const GateStmt& s) {
    auto& c = lookup<qsim::Circuit>(s.circuit, "circuit");
    std::optional<double> theta;
    if (s.theta) theta = s.theta->value;
    c.gate(s.gate, s.qubits, theta);
  }

  void exec(const MeasureStmt& s) { lookup<qsim::Circuit>(s.circuit, "circuit").measure(s.qubit, s.clbit); }

  void exec(const MeasureAllStmt& s) { lookup<qsim::Circuit>(s.circuit, "circuit").measure_all(); }

  void exec(const BackendStmt& s) {
    try {
      bind(s.name, qsim::find_backend(s.backend_id));
    } catch (const qsim::UnknownBackendError& e) {
      fail(e.what());
    }
  }

  void exec(const ObservableStmt& s) { bind(s.name, qsim::Observable(s.terms)); }

  void exec(const TranspileStmt& s) {
    const auto& c = lookup<qsim::Circuit>(s.circuit, "circuit");
    const auto& b = lookup<qsim::Backend>(s.backend, "backend");
    bind(s.out, qsim::transpile(c, b, s.level));
  }

  void exec(const SamplerStmt& s) {
    const auto& c = lookup<qsim::Circuit>(s.circuit, "circuit");
    bind(s.job, qsim::sample(c, s.shots, s.seed, deadline_));
  }

  void exec(const EstimatorStmt& s) {
    const auto& c = lookup<qsim::Circuit>(s.circuit, "circuit");
    const auto& o = lookup<qsim::Observable>(s.observable, "observable");
    bind(s.job, qsim::estimate(c, o, deadline_));
  }

  void exec(const RandomCircuitStmt& s) {
    bind(s.name, qsim::random_circuit(s.name, s.num_qubits, s.depth, s.seed, s.measure, deadline_));
  }

  Env& env_;
  const Deadline& deadline_;
  int line_ = 0;
};

Env interpret(const Program& program, const Deadline& deadline) {
  if (program.dialect != Dialect::qlang) {
    throw std::invalid_argument("only qlang programs run in-process");
  }
  Env env;
  Interpreter interp(env, deadline);
  for (const auto& s : program.statements) {
    deadline.check();
    try {
      interp.run(s);
    } catch (const RuntimeError&) {
      throw;
    } catch (const TimeoutError&) {
      throw;
    } catch (const std::exception& e) {
      // qsim validation errors carry no line; attach it here.
      throw RuntimeError(s.line, e.what());
    }
  }
  return env;
}

}  // namespace qvf::qlang
