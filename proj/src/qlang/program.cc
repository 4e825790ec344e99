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

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qvf/qlang/program.h"

namespace qvf::qlang {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) {
    return false;
  }
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) {
      return false;
    }
  }
  return true;
}

template <class Int>
std::optional<Int> to_int(std::string_view tok) {
  Int v{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    return std::nullopt;
  }
  return v;
}

std::optional<double> to_double(std::string_view tok) {
  double v{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

class LineParser {
 public:
  LineParser(int line, std::vector<std::string_view> tokens) : line_(line), tokens_(std::move(tokens)) {}

  Statement parse() {
    const std::string_view kw = tokens_[0];
    if (kw == "circuit") {
      expect_args(3, "circuit <name> <num_qubits> <num_clbits>");
      return make(CircuitDecl{ident(1), integer<int>(2), integer<int>(3)});
    }
    if (kw == "measure") {
      expect_args(3, "measure <circuit> <qubit> <clbit>");
      return make(MeasureStmt{ident(1), integer<int>(2), integer<int>(3)});
    }
    if (kw == "measure_all") {
      expect_args(1, "measure_all <circuit>");
      return make(MeasureAllStmt{ident(1)});
    }
    if (kw == "backend") {
      expect_args(2, "backend <name> <backend_id>");
      return make(BackendStmt{ident(1), ident(2)});
    }
    if (kw == "observable") {
      if (tokens_.size() < 3) {
        fail("usage: observable <name> <label>:<coeff> [...]");
      }
      ObservableStmt s{ident(1), {}};
      for (size_t i = 2; i < tokens_.size(); ++i) {
        s.terms.push_back(term(tokens_[i]));
      }
      return make(std::move(s));
    }
    if (kw == "transpile") {
      expect_args(4, "transpile <out> <circuit> <backend> <level>");
      return make(TranspileStmt{ident(1), ident(2), ident(3), integer<int>(4)});
    }
    if (kw == "sampler") {
      expect_args(4, "sampler <job> <circuit> shots=<n> seed=<n>");
      SamplerStmt s{ident(1), ident(2), 0, 0};
      s.shots = keyed_int<int64_t>(3, "shots");
      s.seed = keyed_int<uint64_t>(4, "seed");
      return make(std::move(s));
    }
    if (kw == "estimator") {
      expect_args(3, "estimator <job> <circuit> <observable>");
      return make(EstimatorStmt{ident(1), ident(2), ident(3)});
    }
    if (kw == "random_circuit") {
      expect_args(5, "random_circuit <name> <num_qubits> <depth> seed=<n> measure=<bool>");
      RandomCircuitStmt s{ident(1), integer<int>(2), integer<int>(3), 0, false};
      s.seed = keyed_int<uint64_t>(4, "seed");
      const auto value = keyed(5, "measure");
      if (value == "true" || value == "True") {
        s.measure = true;
      } else if (value == "false" || value == "False") {
        s.measure = false;
      } else {
        fail("measure= expects true or false");
      }
      return make(std::move(s));
    }
    if (auto gate = qsim::parse_gate(kw)) {
      const int arity = qsim::gate_arity(*gate);
      const bool param = qsim::gate_is_parametric(*gate);
      expect_args(1 + arity + (param ? 1 : 0), std::string(kw) + " <circuit> <qubit...>" + (param ? " <theta>" : ""));
      GateStmt s{*gate, ident(1), {}, std::nullopt};
      for (int k = 0; k < arity; ++k) {
        s.qubits.push_back(integer<int>(2 + k));
      }
      if (param) {
        try {
          s.theta = parse_angle(tokens_[2 + arity]);
        } catch (const std::invalid_argument& e) {
          fail(e.what());
        }
      }
      return make(std::move(s));
    }
    fail("unknown keyword or gate '" + std::string(kw) + "'");
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, msg); }

  Statement make(StatementBody body) const { return Statement{std::move(body), line_}; }

  void expect_args(size_t n, const std::string& usage) const {
    if (tokens_.size() != n + 1) {
      fail("usage: " + usage);
    }
  }

  std::string ident(size_t i) const {
    if (!is_identifier(tokens_[i])) {
      fail("expected identifier, got '" + std::string(tokens_[i]) + "'");
    }
    return std::string(tokens_[i]);
  }

  template <class Int>
  Int integer(size_t i) const {
    auto v = to_int<Int>(tokens_[i]);
    if (!v) {
      fail("expected integer, got '" + std::string(tokens_[i]) + "'");
    }
    return *v;
  }

  std::string_view keyed(size_t i, std::string_view key) const {
    const std::string_view tok = tokens_[i];
    if (tok.size() <= key.size() + 1 || tok.substr(0, key.size()) != key || tok[key.size()] != '=') {
      fail("expected " + std::string(key) + "=<value>, got '" + std::string(tok) + "'");
    }
    return tok.substr(key.size() + 1);
  }

  template <class Int>
  Int keyed_int(size_t i, std::string_view key) const {
    auto v = to_int<Int>(keyed(i, key));
    if (!v) {
      fail(std::string(key) + "= expects an integer");
    }
    return *v;
  }

  qsim::PauliTerm term(std::string_view tok) const {
    const auto colon = tok.find(':');
    if (colon == std::string_view::npos || colon == 0) {
      fail("expected <label>:<coeff>, got '" + std::string(tok) + "'");
    }
    auto coeff = to_double(tok.substr(colon + 1));
    if (!coeff) {
      fail("bad coefficient in '" + std::string(tok) + "'");
    }
    std::string label(tok.substr(0, colon));
    for (char c : label) {
      if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
        fail("invalid Pauli label '" + label + "'");
      }
    }
    return {label, *coeff};
  }

  int line_;
  std::vector<std::string_view> tokens_;
};

}  // namespace

std::string_view dialect_name(Dialect d) { return d == Dialect::qlang ? "qlang" : "pyqiskit"; }

Dialect parse_dialect(std::string_view name) {
  if (name == "qlang") {
    return Dialect::qlang;
  }
  if (name == "pyqiskit") {
    return Dialect::pyqiskit;
  }
  throw std::invalid_argument("unknown dialect '" + std::string(name) + "'");
}

Angle Angle::from_value(double v) { return Angle{v, format_double(v)}; }

Angle parse_angle(std::string_view token) {
  std::string_view body = token;
  bool negative = false;
  if (!body.empty() && body[0] == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  if (body.substr(0, 2) == "pi") {
    std::string_view rest = body.substr(2);
    double value = std::numbers::pi;
    std::string text = "pi";
    if (!rest.empty()) {
      if (rest[0] != '/') {
        throw std::invalid_argument("bad angle '" + std::string(token) + "'");
      }
      auto k = to_int<int>(rest.substr(1));
      if (!k || *k <= 0) {
        throw std::invalid_argument("bad angle divisor in '" + std::string(token) + "'");
      }
      value /= *k;
      text += "/" + std::to_string(*k);
    }
    return negative ? Angle{-value, "-" + text} : Angle{value, text};
  }
  auto v = to_double(token);
  if (!v) {
    throw std::invalid_argument("bad angle '" + std::string(token) + "'");
  }
  return Angle::from_value(*v);
}

Program parse(std::string_view source) {
  Program program;
  program.dialect = Dialect::qlang;
  program.source = std::string(source);
  int line_no = 0;
  size_t pos = 0;
  while (pos <= source.size()) {
    size_t end = source.find('\n', pos);
    if (end == std::string_view::npos) {
      end = source.size();
    }
    ++line_no;
    std::string_view line = source.substr(pos, end - pos);
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    std::vector<std::string_view> tokens;
    size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    if (!tokens.empty()) {
      program.statements.push_back(LineParser(line_no, std::move(tokens)).parse());
    }
    pos = end + 1;
  }
  return program;
}

std::string render(const Statement& s) {
  std::ostringstream out;
  std::visit(Overloaded{
                 [&](const CircuitDecl& c) { out << "circuit " << c.name << ' ' << c.num_qubits << ' ' << c.num_clbits; },
                 [&](const GateStmt& g) {
                   out << qsim::gate_name(g.gate) << ' ' << g.circuit;
                   for (int q : g.qubits) out << ' ' << q;
                   if (g.theta) out << ' ' << g.theta->text;
                 },
                 [&](const MeasureStmt& m) { out << "measure " << m.circuit << ' ' << m.qubit << ' ' << m.clbit; },
                 [&](const MeasureAllStmt& m) { out << "measure_all " << m.circuit; },
                 [&](const BackendStmt& b) { out << "backend " << b.name << ' ' << b.backend_id; },
                 [&](const ObservableStmt& o) {
                   out << "observable " << o.name;
                   for (const auto& t : o.terms) out << ' ' << t.label << ':' << format_double(t.coeff);
                 },
                 [&](const TranspileStmt& t) {
                   out << "transpile " << t.out << ' ' << t.circuit << ' ' << t.backend << ' ' << t.level;
                 },
                 [&](const SamplerStmt& j) {
                   out << "sampler " << j.job << ' ' << j.circuit << " shots=" << j.shots << " seed=" << j.seed;
                 },
                 [&](const EstimatorStmt& e) { out << "estimator " << e.job << ' ' << e.circuit << ' ' << e.observable; },
                 [&](const RandomCircuitStmt& r) {
                   out << "random_circuit " << r.name << ' ' << r.num_qubits << ' ' << r.depth << " seed=" << r.seed
                       << " measure=" << (r.measure ? "true" : "false");
                 },
             },
             s.body);
  return out.str();
}

std::string render(const std::vector<Statement>& statements) {
  std::string out;
  for (const auto& s : statements) {
    out += render(s);
    out += '\n';
  }
  return out;
}

std::optional<std::string> bound_name(const Statement& s) {
  return std::visit(Overloaded{
                        [](const CircuitDecl& c) -> std::optional<std::string> { return c.name; },
                        [](const BackendStmt& b) -> std::optional<std::string> { return b.name; },
                        [](const ObservableStmt& o) -> std::optional<std::string> { return o.name; },
                        [](const TranspileStmt& t) -> std::optional<std::string> { return t.out; },
                        [](const SamplerStmt& j) -> std::optional<std::string> { return j.job; },
                        [](const EstimatorStmt& e) -> std::optional<std::string> { return e.job; },
                        [](const RandomCircuitStmt& r) -> std::optional<std::string> { return r.name; },
                        [](const auto&) -> std::optional<std::string> { return std::nullopt; },
                    },
                    s.body);
}

std::vector<std::string> referenced_names(const Statement& s) {
  return std::visit(Overloaded{
                        [](const GateStmt& g) -> std::vector<std::string> { return {g.circuit}; },
                        [](const MeasureStmt& m) -> std::vector<std::string> { return {m.circuit}; },
                        [](const MeasureAllStmt& m) -> std::vector<std::string> { return {m.circuit}; },
                        [](const TranspileStmt& t) -> std::vector<std::string> { return {t.circuit, t.backend}; },
                        [](const SamplerStmt& j) -> std::vector<std::string> { return {j.circuit}; },
                        [](const EstimatorStmt& e) -> std::vector<std::string> { return {e.circuit, e.observable}; },
                        [](const auto&) -> std::vector<std::string> { return {}; },
                    },
                    s.body);
}

void rename_binding(Statement& s, const std::string& from, const std::string& to) {
  auto fix = [&](std::string& name) {
    if (name == from) name = to;
  };
  std::visit(Overloaded{
                 [&](CircuitDecl& c) { fix(c.name); },
                 [&](GateStmt& g) { fix(g.circuit); },
                 [&](MeasureStmt& m) { fix(m.circuit); },
                 [&](MeasureAllStmt& m) { fix(m.circuit); },
                 [&](BackendStmt& b) { fix(b.name); },
                 [&](ObservableStmt& o) { fix(o.name); },
                 [&](TranspileStmt& t) {
                   fix(t.out);
                   fix(t.circuit);
                   fix(t.backend);
                 },
                 [&](SamplerStmt& j) {
                   fix(j.job);
                   fix(j.circuit);
                 },
                 [&](EstimatorStmt& e) {
                   fix(e.job);
                   fix(e.circuit);
                   fix(e.observable);
                 },
                 [&](RandomCircuitStmt& r) { fix(r.name); },
             },
             s.body);
}

}  // namespace qvf::qlang
