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

#include <numbers>

#include "gtest/gtest.h"
#include "qvf/common/rng.h"
#include "qvf/qlang/interpreter.h"
#include "qvf/qlang/program.h"

using namespace qvf::qlang;
namespace qsim = qvf::qsim;

namespace {

const char* kAppendixA =
    "# controlled-rx build and transpile\n"
    "circuit qc 2 2\n"
    "crx qc 0 1 0.75\n"
    "backend b line5\n"
    "transpile pm qc b 1\n";

const char* kBell =
    "circuit bell 2 2\n"
    "h bell 0\n"
    "cx bell 0 1\n"
    "measure_all bell\n"
    "sampler j bell shots=16 seed=3\n";

std::string random_ident(qvf::Rng& rng) {
  static const std::vector<std::string> names = {"qc", "b", "obs", "job", "rand_circ", "x1", "_t"};
  return rng.pick(names);
}

Statement random_statement(qvf::Rng& rng) {
  switch (rng.below(10)) {
    case 0: return {CircuitDecl{random_ident(rng), 1 + int(rng.below(5)), int(rng.below(5))}};
    case 1: {
      auto g = qsim::kAllGates[rng.below(std::size(qsim::kAllGates))];
      GateStmt s{g, random_ident(rng), {}, std::nullopt};
      s.qubits.push_back(int(rng.below(4)));
      if (qsim::gate_arity(g) == 2) s.qubits.push_back(int(rng.below(4)));
      if (qsim::gate_is_parametric(g)) {
        s.theta = rng.bernoulli(0.5) ? Angle::from_value(rng.uniform(-7, 7)) : parse_angle("-pi/" + std::to_string(1 + rng.below(8)));
      }
      return {s};
    }
    case 2: return {MeasureStmt{random_ident(rng), int(rng.below(4)), int(rng.below(4))}};
    case 3: return {MeasureAllStmt{random_ident(rng)}};
    case 4: return {BackendStmt{random_ident(rng), "ring8"}};
    case 5: return {ObservableStmt{random_ident(rng), {{"XYZ", rng.uniform(-2, 2)}, {"IIZ", -1.0}}}};
    case 6: return {TranspileStmt{random_ident(rng), random_ident(rng), random_ident(rng), int(rng.below(4))}};
    case 7: return {SamplerStmt{random_ident(rng), random_ident(rng), 1 + int64_t(rng.below(4096)), rng.next_u64()}};
    case 8: return {EstimatorStmt{random_ident(rng), random_ident(rng), random_ident(rng)}};
    default: return {RandomCircuitStmt{random_ident(rng), 1 + int(rng.below(8)), int(rng.below(5)), rng.below(100), rng.bernoulli(0.5)}};
  }
}

}  // namespace

TEST(Parse, appendix_style_statements) {
  auto p = parse("circuit qc 2 2\ncrx qc 0 1 0.75");
  ASSERT_EQ(p.statements.size(), 2u);
  const auto& g = std::get<GateStmt>(p.statements[1].body);
  EXPECT_EQ(g.gate, qsim::Gate::crx);
  EXPECT_EQ(g.qubits, (std::vector<int>{0, 1}));
  EXPECT_DOUBLE_EQ(g.theta->value, 0.75);
  EXPECT_EQ(p.statements[1].line, 2);
}

TEST(Parse, empty_and_comments) {
  EXPECT_TRUE(parse("").statements.empty());
  EXPECT_TRUE(parse("# nothing\n\n   \n").statements.empty());
  EXPECT_EQ(parse("h qc 0 # trailing").statements.size(), 1u);
}

TEST(Parse, syntax_errors_carry_line) {
  try {
    parse("bogus qc");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
    EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos);
  }
  try {
    parse("circuit qc 2 2\n\ncx qc 0");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW(parse("rx qc 0"), ParseError);
  EXPECT_THROW(parse("h qc 0 0.5"), ParseError);
  EXPECT_THROW(parse("circuit 9qc 1 1"), ParseError);
  EXPECT_THROW(parse("sampler j c shots=x seed=1"), ParseError);
  EXPECT_THROW(parse("sampler j c seed=1 shots=2"), ParseError);
  EXPECT_THROW(parse("random_circuit r 3 1 seed=1 measure=maybe"), ParseError);
  EXPECT_THROW(parse("observable o XQ:1"), ParseError);
  EXPECT_THROW(parse("observable o"), ParseError);
  EXPECT_THROW(parse("rx qc 0 pi/0"), ParseError);
  EXPECT_THROW(parse("rx qc 0 nan"), ParseError);
}

TEST(Parse, angle_forms) {
  EXPECT_DOUBLE_EQ(parse_angle("pi/4").value, std::numbers::pi / 4);
  EXPECT_EQ(parse_angle("pi/4").text, "pi/4");
  EXPECT_DOUBLE_EQ(parse_angle("-pi").value, -std::numbers::pi);
  EXPECT_EQ(parse_angle("0.750").text, "0.75");
  EXPECT_DOUBLE_EQ(parse_angle("1e-1").value, 0.1);
}

TEST(Parse, render_round_trip_property) {
  qvf::Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Statement> stmts;
    const int n = int(rng.below(8));
    for (int i = 0; i < n; ++i) stmts.push_back(random_statement(rng));
    const std::string text = render(stmts);
    auto reparsed = parse(text);
    ASSERT_EQ(reparsed.statements, stmts) << text;
    EXPECT_EQ(render(reparsed.statements), text);
  }
}

TEST(Interpret, appendix_program) {
  auto env = interpret(parse(kAppendixA));
  EXPECT_EQ(env.size(), 3u);
  const auto& qc = std::get<qsim::Circuit>(*env.find("qc"));
  EXPECT_EQ(qc.num_qubits(), 2);
  EXPECT_EQ(qc.num_clbits(), 2);
  ASSERT_EQ(qc.ops().size(), 1u);
  EXPECT_EQ(std::get<qsim::GateOp>(qc.ops()[0]).gate, qsim::Gate::crx);
  EXPECT_EQ(value_kind(*env.find("b")), "backend");
  const auto& pm = std::get<qsim::RoutedCircuit>(*env.find("pm"));
  EXPECT_EQ(pm.level, 1);
  EXPECT_EQ(pm.backend_id, "line5");
}

TEST(Interpret, sampler_counts_sum_to_shots) {
  auto env = interpret(parse(kBell));
  const auto& job = std::get<qsim::JobResult>(*env.find("j"));
  int64_t total = 0;
  for (const auto& [k, v] : job.counts) total += v;
  EXPECT_EQ(total, 16);
}

TEST(Interpret, estimator_and_random_circuit) {
  auto env = interpret(parse(
      "circuit qc 2 0\nh qc 0\ncx qc 0 1\nobservable o ZZ:1 ZI:-2\nestimator e qc o\n"
      "random_circuit r 3 2 seed=5 measure=true\n"));
  EXPECT_NEAR(std::get<qsim::JobResult>(*env.find("e")).value, 1.0, 1e-12);
  EXPECT_EQ(std::get<qsim::Circuit>(*env.find("r")).num_clbits(), 3);
}

TEST(Interpret, runtime_errors_carry_line) {
  auto expect_error = [](const char* src, int line, const char* fragment) {
    try {
      interpret(parse(src));
      ADD_FAILURE() << src;
    } catch (const RuntimeError& e) {
      EXPECT_EQ(e.line(), line) << src;
      EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
  };
  expect_error("crx qc 0 1 0.75", 1, "unknown name 'qc'");
  expect_error("circuit qc 2 2\nx qc 2", 2, "out of range");
  expect_error("circuit qc 2 2\nmeasure qc 0 5", 2, "clbit");
  expect_error("circuit qc 2 2\ncircuit qc 1 1", 2, "already bound");
  expect_error("circuit qc 2 2\nbackend b nope", 2, "unknown backend");
  expect_error("circuit qc 2 2\nbackend b line5\ntranspile t b qc 1", 3, "expected a circuit");
  expect_error("circuit qc 2 0\nobservable o Z:1\nestimator e qc o", 3, "width");
  expect_error("circuit qc 2 2\nsampler j qc shots=4 seed=1", 2, "no measurements");
  expect_error("circuit big 15 0", 1, "cap");
}

TEST(Interpret, deterministic) {
  const std::string src = std::string(kBell) + "random_circuit r 4 3 seed=9 measure=true\nsampler k r shots=100 seed=1\n";
  EXPECT_EQ(interpret(parse(src)), interpret(parse(src)));
}

TEST(Interpret, deadline_aborts) {
  auto p = parse("random_circuit big 14 5000 seed=1 measure=true\nsampler j big shots=1 seed=1\n");
  EXPECT_THROW(interpret(p, qvf::Deadline::after(std::chrono::milliseconds(10))), qvf::TimeoutError);
}

TEST(Interpret, rejects_foreign_dialect) {
  Program p;
  p.dialect = Dialect::pyqiskit;
  p.source = "print(1)";
  EXPECT_THROW(interpret(p), std::invalid_argument);
}

TEST(Statement, binding_helpers) {
  auto p = parse("circuit qc 2 0\ntranspile t qc b 1\nestimator e qc o\n");
  EXPECT_EQ(bound_name(p.statements[1]), "t");
  EXPECT_EQ(referenced_names(p.statements[2]), (std::vector<std::string>{"qc", "o"}));
  for (auto& s : p.statements) rename_binding(s, "qc", "qc2");
  EXPECT_EQ(render(p.statements), "circuit qc2 2 0\ntranspile t qc2 b 1\nestimator e qc2 o\n");
}
