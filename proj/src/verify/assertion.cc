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

#include "qvf/verify/assertion.h"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace qvf::verify {
namespace {

using nlohmann::json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string num(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string quoted(const std::string& s) { return "'" + s + "'"; }

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) {
    throw AssertionSchemaError(std::string("assertion is missing '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw AssertionSchemaError(std::string("assertion field '") + key + "' has the wrong type");
  }
}

double tolerance(const json& j, double fallback) {
  double tol = j.contains("tol") ? field<double>(j, "tol") : fallback;
  if (!(tol > 0)) {
    throw AssertionSchemaError("assertion tolerance must be positive");
  }
  return tol;
}

AssertionOutcome pass(std::string msg) { return {true, std::move(msg)}; }
AssertionOutcome fail(std::string msg) { return {false, std::move(msg)}; }

const qsim::Circuit* as_circuit(const qlang::Value& v) {
  if (const auto* c = std::get_if<qsim::Circuit>(&v)) return c;
  if (const auto* r = std::get_if<qsim::RoutedCircuit>(&v)) return &r->circuit;
  return nullptr;
}

std::string describe(const qsim::GateOp& g) {
  std::string s(qsim::gate_name(g.gate));
  s += "(";
  for (size_t i = 0; i < g.qubits.size(); ++i) s += (i ? "," : "") + std::to_string(g.qubits[i]);
  if (g.theta) s += ", theta=" + num(*g.theta);
  return s + ")";
}

}  // namespace

std::string_view assertion_kind(const Assertion& a) {
  static constexpr std::string_view kKinds[] = {
      "var_exists",  "var_kind",           "circuit_num_qubits", "circuit_num_clbits",
      "circuit_has_gate", "routed_respects_coupling", "routed_level", "counts_keys_subset",
      "counts_total", "expectation_close", "observable_terms"};
  return kKinds[a.spec.index()];
}

json to_json(const Assertion& a) {
  json j = {{"name", a.name}, {"kind", std::string(assertion_kind(a))}, {"var", a.var}};
  std::visit(Overloaded{
                 [](const VarExists&) {},
                 [&](const VarKind& s) { j["expected_kind"] = s.kind; },
                 [&](const CircuitNumQubits& s) { j["value"] = s.value; },
                 [&](const CircuitNumClbits& s) { j["value"] = s.value; },
                 [&](const CircuitHasGate& s) {
                   j["gate"] = std::string(qsim::gate_name(s.gate));
                   j["qubits"] = s.qubits;
                   if (s.theta) j["theta"] = *s.theta;
                   j["tol"] = s.tol;
                 },
                 [&](const RoutedRespectsCoupling& s) { j["backend"] = s.backend; },
                 [&](const RoutedLevel& s) { j["level"] = s.level; },
                 [&](const CountsKeysSubset& s) { j["allowed"] = s.allowed; },
                 [&](const CountsTotal& s) { j["shots"] = s.shots; },
                 [&](const ExpectationClose& s) {
                   j["value"] = s.value;
                   j["tol"] = s.tol;
                 },
                 [&](const ObservableTerms& s) {
                   j["labels"] = s.labels;
                   j["coeffs"] = s.coeffs;
                   j["tol"] = s.tol;
                 },
             },
             a.spec);
  return j;
}

Assertion assertion_from_json(const json& j) {
  if (!j.is_object()) {
    throw AssertionSchemaError("assertion must be a JSON object");
  }
  Assertion a;
  a.name = field<std::string>(j, "name");
  a.var = field<std::string>(j, "var");
  const auto kind = field<std::string>(j, "kind");
  if (kind == "var_exists") {
    a.spec = VarExists{};
  } else if (kind == "var_kind") {
    a.spec = VarKind{field<std::string>(j, "expected_kind")};
  } else if (kind == "circuit_num_qubits") {
    a.spec = CircuitNumQubits{field<int>(j, "value")};
  } else if (kind == "circuit_num_clbits") {
    a.spec = CircuitNumClbits{field<int>(j, "value")};
  } else if (kind == "circuit_has_gate") {
    CircuitHasGate s;
    auto gate = qsim::parse_gate(field<std::string>(j, "gate"));
    if (!gate) throw AssertionSchemaError("unknown gate in circuit_has_gate");
    s.gate = *gate;
    s.qubits = field<std::vector<int>>(j, "qubits");
    if (j.contains("theta")) s.theta = field<double>(j, "theta");
    s.tol = tolerance(j, 1e-6);
    a.spec = s;
  } else if (kind == "routed_respects_coupling") {
    a.spec = RoutedRespectsCoupling{field<std::string>(j, "backend")};
  } else if (kind == "routed_level") {
    a.spec = RoutedLevel{field<int>(j, "level")};
  } else if (kind == "counts_keys_subset") {
    a.spec = CountsKeysSubset{field<std::vector<std::string>>(j, "allowed")};
  } else if (kind == "counts_total") {
    a.spec = CountsTotal{field<int64_t>(j, "shots")};
  } else if (kind == "expectation_close") {
    a.spec = ExpectationClose{field<double>(j, "value"), tolerance(j, 1e-9)};
  } else if (kind == "observable_terms") {
    ObservableTerms s{field<std::vector<std::string>>(j, "labels"), field<std::vector<double>>(j, "coeffs"),
                      tolerance(j, 1e-9)};
    if (s.labels.size() != s.coeffs.size()) {
      throw AssertionSchemaError("observable_terms needs one coefficient per label");
    }
    a.spec = std::move(s);
  } else {
    throw AssertionSchemaError("unknown assertion kind '" + kind + "'");
  }
  return a;
}

json to_json(const std::vector<Assertion>& as) {
  json arr = json::array();
  for (const auto& a : as) arr.push_back(to_json(a));
  return arr;
}

std::vector<Assertion> assertions_from_json(const json& j) {
  if (!j.is_array()) {
    throw AssertionSchemaError("assertion list must be a JSON array");
  }
  std::vector<Assertion> out;
  for (const auto& item : j) out.push_back(assertion_from_json(item));
  return out;
}

AssertionOutcome evaluate(const qlang::Env& env, const Assertion& a) {
  const qlang::Value* value = env.find(a.var);
  if (std::holds_alternative<VarExists>(a.spec)) {
    return value ? pass(quoted(a.var) + " is defined") : fail(quoted(a.var) + " is not defined");
  }
  if (value == nullptr) {
    return fail(quoted(a.var) + " is not defined");
  }
  const std::string kind(qlang::value_kind(*value));
  auto wrong_kind = [&](const char* expected) {
    return fail(quoted(a.var) + " is a " + kind + ", expected a " + expected);
  };

  return std::visit(
      Overloaded{
          [&](const VarExists&) { return pass(""); },
          [&](const VarKind& s) {
            return kind == s.kind ? pass(quoted(a.var) + " is a " + kind) : wrong_kind(s.kind.c_str());
          },
          [&](const CircuitNumQubits& s) {
            const auto* c = as_circuit(*value);
            if (!c) return wrong_kind("circuit");
            return c->num_qubits() == s.value ? pass("num_qubits = " + std::to_string(s.value))
                                              : fail("num_qubits is " + std::to_string(c->num_qubits()) +
                                                     ", expected " + std::to_string(s.value));
          },
          [&](const CircuitNumClbits& s) {
            const auto* c = as_circuit(*value);
            if (!c) return wrong_kind("circuit");
            return c->num_clbits() == s.value ? pass("num_clbits = " + std::to_string(s.value))
                                              : fail("num_clbits is " + std::to_string(c->num_clbits()) +
                                                     ", expected " + std::to_string(s.value));
          },
          [&](const CircuitHasGate& s) {
            const auto* c = as_circuit(*value);
            if (!c) return wrong_kind("circuit");
            const qsim::GateOp want{s.gate, s.qubits, s.theta};
            for (const auto& op : c->ops()) {
              const auto* g = std::get_if<qsim::GateOp>(&op);
              if (!g || g->gate != s.gate || g->qubits != s.qubits) continue;
              if (s.theta && (!g->theta || std::abs(*g->theta - *s.theta) > s.tol)) continue;
              return pass("found " + describe(*g));
            }
            std::string seen;
            for (const auto& op : c->ops()) {
              if (const auto* g = std::get_if<qsim::GateOp>(&op)) seen += (seen.empty() ? "" : " ") + describe(*g);
            }
            return fail("no " + describe(want) + " in " + a.var + "; gates: [" + seen + "]");
          },
          [&](const RoutedRespectsCoupling& s) {
            const auto* r = std::get_if<qsim::RoutedCircuit>(value);
            if (!r) return wrong_kind("routed");
            try {
              const auto& backend = qsim::find_backend(s.backend);
              if (r->circuit.num_qubits() > backend.num_qubits) {
                return fail("routed circuit is wider than " + s.backend);
              }
              return qsim::respects_coupling(r->circuit, backend)
                         ? pass("all two-qubit gates on " + s.backend + " edges")
                         : fail("two-qubit gate off the " + s.backend + " coupling map");
            } catch (const qsim::UnknownBackendError& e) {
              return fail(e.what());
            }
          },
          [&](const RoutedLevel& s) {
            const auto* r = std::get_if<qsim::RoutedCircuit>(value);
            if (!r) return wrong_kind("routed");
            return r->level == s.level ? pass("optimization level " + std::to_string(s.level))
                                       : fail("optimization level is " + std::to_string(r->level) + ", expected " +
                                              std::to_string(s.level));
          },
          [&](const CountsKeysSubset& s) {
            const auto* job = std::get_if<qsim::JobResult>(value);
            if (!job) return wrong_kind("job");
            if (job->kind != qsim::JobKind::counts) return fail(quoted(a.var) + " holds no counts");
            for (const auto& [key, n] : job->counts) {
              if (std::find(s.allowed.begin(), s.allowed.end(), key) == s.allowed.end()) {
                return fail("observed key '" + key + "' outside the allowed set");
              }
            }
            return pass("all keys allowed");
          },
          [&](const CountsTotal& s) {
            const auto* job = std::get_if<qsim::JobResult>(value);
            if (!job) return wrong_kind("job");
            if (job->kind != qsim::JobKind::counts) return fail(quoted(a.var) + " holds no counts");
            int64_t total = 0;
            for (const auto& [key, n] : job->counts) total += n;
            return total == s.shots ? pass("counts sum to " + std::to_string(total))
                                    : fail("counts sum to " + std::to_string(total) + ", expected " +
                                           std::to_string(s.shots));
          },
          [&](const ExpectationClose& s) {
            const auto* job = std::get_if<qsim::JobResult>(value);
            if (!job) return wrong_kind("job");
            if (job->kind != qsim::JobKind::expectation) return fail(quoted(a.var) + " holds no expectation value");
            return std::abs(job->value - s.value) <= s.tol
                       ? pass("expectation " + num(job->value))
                       : fail("expectation is " + num(job->value) + ", expected " + num(s.value));
          },
          [&](const ObservableTerms& s) {
            const auto* obs = std::get_if<qsim::Observable>(value);
            if (!obs) return wrong_kind("observable");
            const auto& terms = obs->terms();
            if (terms.size() != s.labels.size()) {
              return fail("observable has " + std::to_string(terms.size()) + " terms, expected " +
                          std::to_string(s.labels.size()));
            }
            for (size_t i = 0; i < terms.size(); ++i) {
              if (terms[i].label != s.labels[i]) {
                return fail("term " + std::to_string(i) + " label " + terms[i].label + ", expected " + s.labels[i]);
              }
              if (std::abs(terms[i].coeff - s.coeffs[i]) > s.tol) {
                return fail("term " + std::to_string(i) + " coefficient " + num(terms[i].coeff) + ", expected " +
                            num(s.coeffs[i]));
              }
            }
            return pass("terms match");
          },
      },
      a.spec);
}

}  // namespace qvf::verify
