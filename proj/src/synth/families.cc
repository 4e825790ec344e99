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

#include <fmt/format.h>

#include "qvf/qlang/program.h"
#include "qvf/qsim/backend.h"
#include "qvf/qsim/simulator.h"
#include "qvf/synth/task.h"

namespace qvf::synth {
namespace {

using nlohmann::json;
using verify::Assertion;

std::string coeff_text(double c) { return qlang::Angle::from_value(c).text; }

Assertion exists(const std::string& var) { return {var + "_exists", var, verify::VarExists{}}; }
Assertion kind_of(const std::string& var, const std::string& kind) {
  return {var + "_is_" + kind, var, verify::VarKind{kind}};
}

std::string str(const json& slots, const char* key) { return slots.at(key).get<std::string>(); }
int num(const json& slots, const char* key) { return slots.at(key).get<int>(); }

std::string gate_phrase(qsim::Gate g) {
  switch (g) {
    case qsim::Gate::crx: return "controlled-rx";
    case qsim::Gate::cry: return "controlled-ry";
    case qsim::Gate::crz: return "controlled-rz";
    case qsim::Gate::cx: return "controlled-not";
    case qsim::Gate::cz: return "controlled-z";
    default: return std::string(qsim::gate_name(g));
  }
}

const std::vector<std::string> kAngles = {"0.25", "0.5", "0.75", "1", "1.5", "pi/2", "pi/3", "pi/4"};

// Circuit build with one two-qubit gate, then transpilation.
class CircuitTranspileFamily : public TemplateFamily {
 public:
  std::string_view id() const override { return "T1"; }
  bool requires_runtime() const override { return false; }
  unsigned weight() const override { return 9; }

  std::vector<SlotSpec> slot_spec() const override {
    return {{"name", "{qc, circ, my_circuit, qc1}"},
            {"n", "2..5"},
            {"gate", "{crx, cry, crz, cx, cz}"},
            {"a", "0..n-1"},
            {"b", "0..n-1, != a"},
            {"theta", "{0.25, 0.5, 0.75, 1, 1.5, pi/2, pi/3, pi/4} (rotations only)"},
            {"backend", "{line5, tee5, ring8}"},
            {"backend_var", "{backend, b, dev}"},
            {"level", "0..3"},
            {"out", "{pm_circ, transpiled, qc_t, isa_circuit}"}};
  }

  std::string_view prompt_template() const override {
    return "Design a circuit named {name} that has {n} quantum bits & {n} classical bits. Then insert {gate_phrase} "
           "gate between qubits {a} and {b}{theta_clause}. Next, load the {backend} backend into a variable named "
           "{backend_var}. Also, it should work with an optimization level {level}. Now use it to transpile the "
           "circuit and name the result {out}.";
  }

  json draw_slots(Rng& rng) const override {
    static const std::vector<std::string> names = {"qc", "circ", "my_circuit", "qc1"};
    static const std::vector<std::string> gates = {"crx", "cry", "crz", "cx", "cz"};
    static const std::vector<std::string> backends = {"line5", "tee5", "ring8"};
    static const std::vector<std::string> backend_vars = {"backend", "b", "dev"};
    static const std::vector<std::string> outs = {"pm_circ", "transpiled", "qc_t", "isa_circuit"};
    json s;
    s["name"] = rng.pick(names);
    const int n = 2 + static_cast<int>(rng.below(4));
    s["n"] = n;
    const auto gate = rng.pick(gates);
    s["gate"] = gate;
    const int a = static_cast<int>(rng.below(n));
    int b = static_cast<int>(rng.below(n - 1));
    if (b >= a) ++b;
    s["a"] = a;
    s["b"] = b;
    s["theta"] = qsim::gate_is_parametric(*qsim::parse_gate(gate)) ? json(rng.pick(kAngles)) : json(nullptr);
    s["backend"] = rng.pick(backends);
    s["backend_var"] = rng.pick(backend_vars);
    s["level"] = static_cast<int>(rng.below(4));
    s["out"] = rng.pick(outs);
    return s;
  }

  json complete_slots(json s) const override {
    const auto gate = *qsim::parse_gate(s.at("gate").get<std::string>());
    s["gate_phrase"] = gate_phrase(gate);
    s["theta_clause"] =
        s.at("theta").is_string() ? ", and set the gate parameters to theta=" + s.at("theta").get<std::string>() : "";
    return s;
  }

  std::string reference(const json& s) const override {
    std::string gate_line = fmt::format("{} {} {} {}", str(s, "gate"), str(s, "name"), num(s, "a"), num(s, "b"));
    if (s.at("theta").is_string()) gate_line += " " + str(s, "theta");
    return fmt::format("circuit {0} {1} {1}\n{2}\nbackend {3} {4}\ntranspile {5} {0} {3} {6}\n", str(s, "name"),
                       num(s, "n"), gate_line, str(s, "backend_var"), str(s, "backend"), str(s, "out"),
                       num(s, "level"));
  }

  std::vector<Assertion> assertions(const json& s) const override {
    const auto name = str(s, "name");
    const auto bvar = str(s, "backend_var");
    const auto out = str(s, "out");
    verify::CircuitHasGate has{*qsim::parse_gate(str(s, "gate")), {num(s, "a"), num(s, "b")}, std::nullopt, 1e-6};
    if (s.at("theta").is_string()) has.theta = qlang::parse_angle(str(s, "theta")).value;
    return {exists(name),
            kind_of(name, "circuit"),
            {name + "_num_qubits", name, verify::CircuitNumQubits{num(s, "n")}},
            {name + "_num_clbits", name, verify::CircuitNumClbits{num(s, "n")}},
            {name + "_has_" + str(s, "gate"), name, has},
            exists(bvar),
            kind_of(bvar, "backend"),
            exists(out),
            kind_of(out, "routed"),
            {out + "_level", out, verify::RoutedLevel{num(s, "level")}},
            {out + "_coupling", out, verify::RoutedRespectsCoupling{str(s, "backend")}}};
  }
};

// Seeded random circuit, then transpilation.
class RandomTranspileFamily : public TemplateFamily {
 public:
  std::string_view id() const override { return "T2"; }
  bool requires_runtime() const override { return false; }
  unsigned weight() const override { return 9; }

  std::vector<SlotSpec> slot_spec() const override {
    return {{"name", "{rand_circ, random_qc, rc}"},
            {"nq", "2..8"},
            {"depth", "1..4"},
            {"circuit_seed", "0..99"},
            {"measure", "{True, False}"},
            {"backend", "registry entries with >= nq qubits"},
            {"backend_var", "{backend, fake_backend, dev}"},
            {"level", "0..3"},
            {"out", "{transpiled, routed, isa_circ}"}};
  }

  std::string_view prompt_template() const override {
    return "Construct a random circuit called {name} with {nq} qbits and of depth {depth}. Also set measure to "
           "{measure}. Remember to set its seed to {circuit_seed}. Once the circuit has been created load the "
           "{backend} backend as {backend_var}. Also it should be using optimization level {level}. Finally use it "
           "to transpile the circuit and store the result in {out}.";
  }

  json draw_slots(Rng& rng) const override {
    static const std::vector<std::string> names = {"rand_circ", "random_qc", "rc"};
    static const std::vector<std::string> backend_vars = {"backend", "fake_backend", "dev"};
    static const std::vector<std::string> outs = {"transpiled", "routed", "isa_circ"};
    json s;
    s["name"] = rng.pick(names);
    const int nq = 2 + static_cast<int>(rng.below(7));
    s["nq"] = nq;
    s["depth"] = 1 + static_cast<int>(rng.below(4));
    s["circuit_seed"] = static_cast<int>(rng.below(100));
    s["measure"] = rng.bernoulli(0.5) ? "True" : "False";
    std::vector<std::string> fits;
    for (const auto& b : qsim::backend_registry()) {
      if (b.num_qubits >= nq) fits.push_back(b.id);
    }
    s["backend"] = rng.pick(fits);
    s["backend_var"] = rng.pick(backend_vars);
    s["level"] = static_cast<int>(rng.below(4));
    s["out"] = rng.pick(outs);
    return s;
  }

  std::string reference(const json& s) const override {
    return fmt::format("random_circuit {0} {1} {2} seed={3} measure={4}\nbackend {5} {6}\ntranspile {7} {0} {5} {8}\n",
                       str(s, "name"), num(s, "nq"), num(s, "depth"), num(s, "circuit_seed"),
                       str(s, "measure") == "True" ? "true" : "false", str(s, "backend_var"), str(s, "backend"),
                       str(s, "out"), num(s, "level"));
  }

  std::vector<Assertion> assertions(const json& s) const override {
    const auto name = str(s, "name");
    const auto bvar = str(s, "backend_var");
    const auto out = str(s, "out");
    const int nq = num(s, "nq");
    return {exists(name),
            kind_of(name, "circuit"),
            {name + "_num_qubits", name, verify::CircuitNumQubits{nq}},
            {name + "_num_clbits", name, verify::CircuitNumClbits{str(s, "measure") == "True" ? nq : 0}},
            exists(bvar),
            kind_of(bvar, "backend"),
            exists(out),
            kind_of(out, "routed"),
            {out + "_level", out, verify::RoutedLevel{num(s, "level")}},
            {out + "_coupling", out, verify::RoutedRespectsCoupling{str(s, "backend")}}};
  }
};

// State preparation plus an estimator job over a Pauli sum.
class EstimatorFamily : public TemplateFamily {
 public:
  std::string_view id() const override { return "T3"; }
  bool requires_runtime() const override { return true; }
  unsigned weight() const override { return 1; }

  std::vector<SlotSpec> slot_spec() const override {
    return {{"circ", "{qc, state, psi}"},
            {"n", "2..5"},
            {"prep", "1..n ops from {h, x, ry(theta), rx(theta)} plus optional cx(0,1)"},
            {"obs", "{observable, obs, hamiltonian}"},
            {"k", "1..3"},
            {"labels", "k strings over {I,X,Y,Z} of length n"},
            {"coeffs", "k values from {1, -1, 0.5, -0.5, 2}"},
            {"job", "{job, result, est_job}"}};
  }

  std::string_view prompt_template() const override {
    return "Create a quantum circuit {circ} with {n} qubits. {prep_sentence} Define the observables in a variable "
           "named {obs} using {k} Pauli matrices with the following labels {labels}, and set the coefficients to "
           "{coeffs}. Finally, run the estimator on {circ} with {obs}, the job should be called {job}.";
  }

  json draw_slots(Rng& rng) const override {
    static const std::vector<std::string> circs = {"qc", "state", "psi"};
    static const std::vector<std::string> obs_names = {"observable", "obs", "hamiltonian"};
    static const std::vector<std::string> jobs = {"job", "result", "est_job"};
    static const std::vector<std::string> prep_gates = {"h", "x", "ry", "rx"};
    static const std::vector<double> coeffs = {1.0, -1.0, 0.5, -0.5, 2.0};
    static const std::string paulis = "IXYZ";
    json s;
    s["circ"] = rng.pick(circs);
    const int n = 2 + static_cast<int>(rng.below(4));
    s["n"] = n;
    json prep = json::array();
    const int count = 1 + static_cast<int>(rng.below(n));
    for (int i = 0; i < count; ++i) {
      const auto g = rng.pick(prep_gates);
      json op = {{"gate", g}, {"qubits", {static_cast<int>(rng.below(n))}}};
      if (g == "ry" || g == "rx") op["theta"] = rng.pick(kAngles);
      prep.push_back(op);
    }
    if (rng.bernoulli(0.5)) prep.push_back({{"gate", "cx"}, {"qubits", {0, 1}}});
    s["prep"] = prep;
    s["obs"] = rng.pick(obs_names);
    const int k = 1 + static_cast<int>(rng.below(3));
    json labels = json::array(), cs = json::array();
    for (int t = 0; t < k; ++t) {
      std::string label;
      for (int q = 0; q < n; ++q) label.push_back(paulis[rng.below(4)]);
      labels.push_back(label);
      cs.push_back(rng.pick(coeffs));
    }
    s["k"] = k;
    s["label_list"] = labels;
    s["coeff_list"] = cs;
    s["job"] = rng.pick(jobs);
    return s;
  }

  json complete_slots(json s) const override {
    std::string sentence;
    const auto& prep = s.at("prep");
    for (size_t i = 0; i < prep.size(); ++i) {
      const auto& op = prep[i];
      const auto g = op.at("gate").get<std::string>();
      std::string part;
      if (g == "cx") {
        part = "cx from qubit 0 to qubit 1";
      } else if (op.contains("theta")) {
        part = fmt::format("{} with theta={} to qubit {}", g, op.at("theta").get<std::string>(),
                           op.at("qubits")[0].get<int>());
      } else {
        part = fmt::format("{} to qubit {}", g, op.at("qubits")[0].get<int>());
      }
      sentence += (i == 0 ? "Apply " : ", then ") + part;
    }
    s["prep_sentence"] = sentence + ".";
    std::string labels, coeffs;
    for (size_t i = 0; i < s.at("label_list").size(); ++i) {
      labels += (i ? "," : "") + s.at("label_list")[i].get<std::string>();
      coeffs += (i ? "," : "") + coeff_text(s.at("coeff_list")[i].get<double>());
    }
    s["labels"] = labels;
    s["coeffs"] = coeffs;
    return s;
  }

  std::string reference(const json& s) const override {
    const auto circ = str(s, "circ");
    std::string src = fmt::format("circuit {} {} 0\n", circ, num(s, "n"));
    for (const auto& op : s.at("prep")) {
      src += op.at("gate").get<std::string>() + " " + circ;
      for (int q : op.at("qubits")) src += " " + std::to_string(q);
      if (op.contains("theta")) src += " " + op.at("theta").get<std::string>();
      src += "\n";
    }
    src += "observable " + str(s, "obs");
    for (size_t i = 0; i < s.at("label_list").size(); ++i) {
      src += " " + s.at("label_list")[i].get<std::string>() + ":" + coeff_text(s.at("coeff_list")[i].get<double>());
    }
    src += fmt::format("\nestimator {} {} {}\n", str(s, "job"), circ, str(s, "obs"));
    return src;
  }

  // Expected value from a circuit assembled directly from the slots.
  static double expected_value(const json& s) {
    qsim::Circuit c(str(s, "circ"), num(s, "n"), 0);
    for (const auto& op : s.at("prep")) {
      std::optional<double> theta;
      if (op.contains("theta")) theta = qlang::parse_angle(op.at("theta").get<std::string>()).value;
      c.gate(*qsim::parse_gate(op.at("gate").get<std::string>()), op.at("qubits").get<std::vector<int>>(), theta);
    }
    std::vector<qsim::PauliTerm> terms;
    for (size_t i = 0; i < s.at("label_list").size(); ++i) {
      terms.push_back({s.at("label_list")[i].get<std::string>(), s.at("coeff_list")[i].get<double>()});
    }
    return qsim::estimate(c, qsim::Observable(terms)).value;
  }

  std::vector<Assertion> assertions(const json& s) const override {
    const auto circ = str(s, "circ");
    const auto obs = str(s, "obs");
    const auto job = str(s, "job");
    return {exists(circ),
            {circ + "_num_qubits", circ, verify::CircuitNumQubits{num(s, "n")}},
            exists(obs),
            kind_of(obs, "observable"),
            {obs + "_terms", obs,
             verify::ObservableTerms{s.at("label_list").get<std::vector<std::string>>(),
                                     s.at("coeff_list").get<std::vector<double>>(), 1e-9}},
            exists(job),
            kind_of(job, "job"),
            {job + "_value", job, verify::ExpectationClose{expected_value(s), 1e-9}}};
  }
};

// Bell or GHZ preparation measured through the sampler.
class SamplerFamily : public TemplateFamily {
 public:
  std::string_view id() const override { return "T4"; }
  bool requires_runtime() const override { return true; }
  unsigned weight() const override { return 1; }

  std::vector<SlotSpec> slot_spec() const override {
    return {{"state", "{bell, ghz}"},
            {"n", "2 for bell, 3..5 for ghz"},
            {"circ", "{bell, ghz, qc}"},
            {"shots", "{128, 256, 512, 1024}"},
            {"sample_seed", "0..999"},
            {"job", "{job, result, counts_job}"}};
  }

  std::string_view prompt_template() const override {
    return "Create {state_phrase} named {circ} on {n} qubits with {n} classical bits and measure all qubits. Then "
           "execute the circuit with the sampler primitive using {shots} shots and seed {sample_seed}; the job "
           "should be called {job}.";
  }

  json draw_slots(Rng& rng) const override {
    static const std::vector<std::string> circs = {"bell", "ghz", "qc"};
    static const std::vector<int> shots = {128, 256, 512, 1024};
    static const std::vector<std::string> jobs = {"job", "result", "counts_job"};
    json s;
    const bool bell = rng.bernoulli(0.5);
    s["state"] = bell ? "bell" : "ghz";
    s["n"] = bell ? 2 : 3 + static_cast<int>(rng.below(3));
    s["circ"] = rng.pick(circs);
    s["shots"] = rng.pick(shots);
    s["sample_seed"] = static_cast<int>(rng.below(1000));
    s["job"] = rng.pick(jobs);
    return s;
  }

  json complete_slots(json s) const override {
    s["state_phrase"] = str(s, "state") == "bell" ? "a Bell circuit" : "a GHZ circuit";
    return s;
  }

  std::string reference(const json& s) const override {
    const auto c = str(s, "circ");
    const int n = num(s, "n");
    std::string src = fmt::format("circuit {0} {1} {1}\nh {0} 0\n", c, n);
    for (int q = 0; q + 1 < n; ++q) src += fmt::format("cx {} {} {}\n", c, q, q + 1);
    src += fmt::format("measure_all {0}\nsampler {1} {0} shots={2} seed={3}\n", c, str(s, "job"), num(s, "shots"),
                       num(s, "sample_seed"));
    return src;
  }

  std::vector<Assertion> assertions(const json& s) const override {
    const auto c = str(s, "circ");
    const auto job = str(s, "job");
    const int n = num(s, "n");
    return {exists(c),
            kind_of(c, "circuit"),
            {c + "_num_qubits", c, verify::CircuitNumQubits{n}},
            {c + "_has_h", c, verify::CircuitHasGate{qsim::Gate::h, {0}, std::nullopt, 1e-6}},
            {c + "_has_cx", c, verify::CircuitHasGate{qsim::Gate::cx, {0, 1}, std::nullopt, 1e-6}},
            exists(job),
            kind_of(job, "job"),
            {job + "_shots", job, verify::CountsTotal{num(s, "shots")}},
            {job + "_keys", job, verify::CountsKeysSubset{{std::string(n, '0'), std::string(n, '1')}}}};
  }
};

}  // namespace

std::vector<std::unique_ptr<TemplateFamily>> builtin_families() {
  std::vector<std::unique_ptr<TemplateFamily>> out;
  out.push_back(std::make_unique<CircuitTranspileFamily>());
  out.push_back(std::make_unique<RandomTranspileFamily>());
  out.push_back(std::make_unique<EstimatorFamily>());
  out.push_back(std::make_unique<SamplerFamily>());
  return out;
}

}  // namespace qvf::synth
