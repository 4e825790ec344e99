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

// Acceptance suite. Prints one [PASS]/[FAIL] line per criterion and exits
// non-zero when any criterion fails.

#include <unistd.h>

#include <bit>
#include <chrono>
#include <cmath>
#include <complex>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "fmt/format.h"
#include "json.hpp"
#include "qvf/align/embed.h"
#include "qvf/align/objectives.h"
#include "qvf/candidates/mock.h"
#include "qvf/cli/cli.h"
#include "qvf/cli/config.h"
#include "qvf/common/io.h"
#include "qvf/common/rng.h"
#include "qvf/evalkit/pass_at_k.h"
#include "qvf/merge/slerp.h"
#include "qvf/qsim/random_circuit.h"
#include "qvf/qsim/simulator.h"
#include "qvf/qsim/transpile.h"
#include "qvf/sandbox/batch.h"
#include "qvf/synth/task.h"
#include "qvf/verify/reward.h"

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

int failures = 0;

void criterion(const std::string& name, const std::function<Verdict()>& body) {
  const auto start = Clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v.ok = false;
    v.detail = std::string("exception: ") + e.what();
  }
  const double s = std::chrono::duration<double>(Clock::now() - start).count();
  if (!v.ok) ++failures;
  std::cout << (v.ok ? "[PASS] " : "[FAIL] ") << name << " (" << fmt::format("{:.3f}", s) << " s)";
  if (!v.detail.empty()) std::cout << ": " << v.detail;
  std::cout << std::endl;
}

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

int cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = qvf::cli::run_cli(args, out, err);
  if (code != 0) std::cerr << err.str();
  return code;
}

// ---------------------------------------------------------------------------

Verdict estimator_exactness() {
  using namespace qvf::qsim;
  Verdict v;
  const auto start = Clock::now();
  Circuit bell("bell", 2, 0);
  bell.gate(Gate::h, {0});
  bell.gate(Gate::cx, {0, 1});
  Circuit zero("zero", 1, 0);
  const double zz = estimate(bell, Observable({{"ZZ", 1.0}})).value;
  const double zi = estimate(bell, Observable({{"ZI", 1.0}})).value;
  const double z = estimate(zero, Observable({{"Z", 1.0}})).value;
  v.require(std::abs(zz - 1.0) <= 1e-12, fmt::format("Bell ZZ = {}", zz));
  v.require(std::abs(zi) <= 1e-12, fmt::format("Bell ZI = {}", zi));
  v.require(std::abs(z - 1.0) <= 1e-12, fmt::format("|0> Z = {}", z));
  v.require(seconds_since(start) < 1.0, "slower than 1 s");
  v.detail = v.ok ? fmt::format("ZZ={} ZI={} Z={}", zz, zi, z) : v.detail;
  return v;
}

Verdict pass_at_k_oracle() {
  Verdict v;
  const auto start = Clock::now();
  int cases = 0;
  double worst = 0.0;
  for (int n = 1; n <= 8; ++n) {
    for (int c = 0; c <= n; ++c) {
      for (int k = 1; k <= n; ++k) {
        // Samples 0..c-1 are the correct ones; count k-subsets that hit one.
        int hits = 0, total = 0;
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
          if (std::popcount(mask) != k) continue;
          ++total;
          if (mask & ((1u << c) - 1)) ++hits;
        }
        const double oracle = static_cast<double>(hits) / total;
        const double got = qvf::evalkit::pass_at_k(n, c, k);
        worst = std::max(worst, std::abs(got - oracle));
        ++cases;
      }
    }
  }
  v.require(worst <= 1e-12, fmt::format("max error {}", worst));
  v.require(seconds_since(start) < 1.0, "slower than 1 s");
  if (v.ok) v.detail = fmt::format("{} cases, max error {:.2e}", cases, worst);
  return v;
}

Verdict reward_definition() {
  using namespace qvf::verify;
  Verdict v;
  qvf::Rng rng(20260101);
  const ExecutionStatus failed[] = {ExecutionStatus::parse_error, ExecutionStatus::runtime_error,
                                    ExecutionStatus::timeout};
  for (int i = 0; i < 1000; ++i) {
    TestReport report;
    const size_t total = 1 + rng.below(12);
    size_t passed = 0;
    for (size_t t = 0; t < total; ++t) {
      const bool ok = rng.uniform() < 0.5;
      passed += ok ? 1 : 0;
      report.results.push_back({"t" + std::to_string(t), ok, ""});
    }
    const double r = quantum_reward(report);
    v.require(r == static_cast<double>(passed) / static_cast<double>(total),
              fmt::format("case {}: reward {} for {}/{}", i, r, passed, total));

    for (size_t t = 0; t < total; ++t) {
      if (report.results[t].passed) continue;
      TestReport flipped = report;
      flipped.results[t].passed = true;
      v.require(quantum_reward(flipped) > r, fmt::format("case {}: flipping test {} did not raise the reward", i, t));
    }

    TestReport crashed = report;
    crashed.execution_status = failed[i % 3];
    v.require(quantum_reward(crashed) == 0.0, fmt::format("case {}: failed execution scored non-zero", i));
  }
  if (v.ok) v.detail = "1000 seeded cases";
  return v;
}

struct PipelineRun {
  fs::path root;
  bool ok = false;
};

std::vector<std::string> pipeline_files() {
  return {"tasks.jsonl",        "tasks.jsonl.manifest.json", "cands.jsonl", "cands.jsonl.manifest.json",
          "run/bucket_a.jsonl", "run/bucket_b.jsonl",        "run/run.json"};
}

bool run_pipeline(const fs::path& root) {
  fs::create_directories(root);
  const auto p = [&](const std::string& f) { return (root / f).string(); };
  return cli({"generate", "--count", "200", "--seed", "7", "--out", p("tasks.jsonl")}) == 0 &&
         cli({"sample", "--tasks", p("tasks.jsonl"), "--generator", "mock", "--n", "16", "--mutation-rate", "0.5",
              "--seed", "7", "--out", p("cands.jsonl")}) == 0 &&
         cli({"verify", "--tasks", p("tasks.jsonl"), "--candidates", p("cands.jsonl"), "--out-dir", p("run"),
              "--pool-size", "4"}) == 0;
}

std::vector<qvf::sandbox::VerifiedSample> load_bucket(const fs::path& file) {
  std::vector<qvf::sandbox::VerifiedSample> out;
  for (const auto& j : qvf::read_jsonl(file)) out.push_back(qvf::sandbox::sample_from_json(j));
  return out;
}

Verdict end_to_end_determinism(const fs::path& work) {
  Verdict v;
  const auto start = Clock::now();
  v.require(run_pipeline(work / "first"), "first run failed");
  v.require(run_pipeline(work / "second"), "second run failed");
  if (!v.ok) return v;
  for (const auto& f : pipeline_files()) {
    v.require(qvf::read_file(work / "first" / f) == qvf::read_file(work / "second" / f), f + " differs across reruns");
  }
  const auto a = load_bucket(work / "first/run/bucket_a.jsonl");
  const auto b = load_bucket(work / "first/run/bucket_b.jsonl");
  v.require(a.size() + b.size() == 3200, fmt::format("|A|+|B| = {}", a.size() + b.size()));

  std::map<std::string, qvf::synth::Task> tasks;
  for (const auto& j : qvf::read_jsonl(work / "first/tasks.jsonl")) {
    auto t = qvf::synth::task_from_json(j);
    tasks.emplace(t.task_id, std::move(t));
  }
  qvf::sandbox::Sandbox sandbox;
  size_t reverified = 0;
  for (const auto& s : a) {
    const double r = qvf::sandbox::reverify(s, tasks.at(s.prompt_id), sandbox);
    v.require(r == 1.0, s.candidate_id + " re-verified to " + std::to_string(r));
    reverified += r == 1.0 ? 1 : 0;
  }
  for (const auto& s : b) v.require(s.rewards.r_quantum < 1.0, s.candidate_id + " in B with reward 1");
  const double elapsed = seconds_since(start);
  v.require(elapsed < 300.0, fmt::format("took {:.1f} s", elapsed));
  if (v.ok) v.detail = fmt::format("|A|={} |B|={}, {} re-verified, byte-identical reruns", a.size(), b.size(), reverified);
  return v;
}

Verdict dpo_mining(const fs::path& work) {
  Verdict v;
  const auto run = work / "first/run";
  v.require(qvf::cli::default_config().at("n_per_prompt") == 16, "n_per_prompt default is not 16");
  v.require(cli({"mine-dpo", "--buckets", run.string(), "--out", (work / "pairs.jsonl").string()}) == 0,
            "mine-dpo failed");
  if (!v.ok) return v;

  std::map<std::string, std::vector<qvf::sandbox::VerifiedSample>> accepted, rejected;
  for (const auto& s : load_bucket(run / "bucket_a.jsonl")) accepted[s.prompt_id].push_back(s);
  for (const auto& s : load_bucket(run / "bucket_b.jsonl")) rejected[s.prompt_id].push_back(s);

  size_t pairs = 0;
  std::set<std::string> paired;
  for (const auto& j : qvf::read_jsonl(work / "pairs.jsonl")) {
    const std::string prompt = j.at("prompt_id");
    v.require(paired.insert(prompt).second, prompt + " has two pairs");
    v.require(accepted.count(prompt) > 0, prompt + " has no accepted sample but was paired");
    const auto chosen = qvf::align::embed_trigram(j.at("chosen").get<std::string>());
    double best = -2.0;
    for (const auto& s : rejected[prompt]) {
      best = std::max(best, qvf::align::cosine(chosen, qvf::align::embed_trigram(s.completion)));
    }
    const double got = qvf::align::cosine(chosen, qvf::align::embed_trigram(j.at("rejected").get<std::string>()));
    v.require(std::abs(got - best) <= 1e-12, fmt::format("{}: rejected similarity {} < max {}", prompt, got, best));
    ++pairs;
  }
  for (const auto& [prompt, list] : accepted) {
    if (!rejected[prompt].empty()) v.require(paired.count(prompt) > 0, prompt + " has A and B samples but no pair");
  }
  if (v.ok) v.detail = fmt::format("{} pairs checked against an exhaustive scan", pairs);
  return v;
}

Verdict grpo_math() {
  Verdict v;
  qvf::Rng rng(99);
  double worst_mean = 0.0, worst_std = 0.0;
  for (int g = 0; g < 1000; ++g) {
    std::vector<double> rewards(32);
    for (auto& r : rewards) r = static_cast<double>(rng.below(9)) / 8.0;
    if (std::all_of(rewards.begin(), rewards.end(), [&](double r) { return r == rewards[0]; })) rewards[0] += 0.125;
    const auto adv = qvf::align::grpo_advantages(rewards);
    double mean = 0.0;
    for (double a : adv) mean += a;
    mean /= 32.0;
    double var = 0.0;
    for (double a : adv) var += (a - mean) * (a - mean);
    const double sd = std::sqrt(var / 32.0);
    worst_mean = std::max(worst_mean, std::abs(mean));
    worst_std = std::max(worst_std, std::abs(sd - 1.0));
  }
  v.require(worst_mean <= 1e-9, fmt::format("advantage mean off by {}", worst_mean));
  v.require(worst_std <= 1e-4, fmt::format("advantage std off by {}", worst_std));
  for (double c : {0.0, 0.5, 1.0}) {
    for (double a : qvf::align::grpo_advantages(std::vector<double>(32, c))) v.require(a == 0.0, "constant group");
  }
  const double loss = qvf::align::dpo_loss(0.0, 0.0, 0.0, 0.0);
  v.require(std::abs(loss - std::log(2.0)) <= 1e-9, fmt::format("dpo_loss at zero margin = {}", loss));
  double min_kl = 1.0;
  for (int i = 0; i < 10000; ++i) {
    const double d = -20.0 + 40.0 * i / 9999.0;
    min_kl = std::min(min_kl, qvf::align::kl_estimator(0.3 + d, 0.3));
  }
  v.require(min_kl >= 0.0, fmt::format("KL term reached {}", min_kl));
  if (v.ok) v.detail = fmt::format("max |mean|={:.1e}, max |std-1|={:.1e}, min KL={:.1e}", worst_mean, worst_std, min_kl);
  return v;
}

Verdict slerp_properties() {
  using namespace qvf::merge;
  Verdict v;
  qvf::Rng rng(5);
  auto unit = [&](size_t n) {
    std::vector<float> x(n);
    double norm = 0.0;
    for (auto& f : x) {
      f = static_cast<float>(rng.uniform() * 2.0 - 1.0);
      norm += static_cast<double>(f) * f;
    }
    for (auto& f : x) f = static_cast<float>(f / std::sqrt(norm));
    return x;
  };
  auto norm = [](const std::vector<float>& x) {
    double s = 0.0;
    for (float f : x) s += static_cast<double>(f) * f;
    return std::sqrt(s);
  };
  double worst_norm = 0.0, worst_sym = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = unit(64), b = unit(64);
    v.require(slerp(a, b, {0.0}) == a, "t=0 is not a");
    v.require(slerp(a, b, {1.0}) == b, "t=1 is not b");
    for (int i = 0; i <= 20; ++i) {
      const double t = i / 20.0;
      const auto m = slerp(a, b, {t});
      const auto r = slerp(b, a, {1.0 - t});
      worst_norm = std::max(worst_norm, std::abs(norm(m) - 1.0));
      for (size_t k = 0; k < m.size(); ++k) worst_sym = std::max(worst_sym, static_cast<double>(std::abs(m[k] - r[k])));
    }
  }
  v.require(worst_norm <= 1e-6, fmt::format("norm drift {}", worst_norm));
  v.require(worst_sym <= 1e-6, fmt::format("asymmetry {}", worst_sym));

  TensorFile file;
  file.tensors.push_back({"layer.0", {2, 3}, {1.5f, -0.0f, std::nanf(""), 3e-38f, -7.25f, 1e30f}});
  file.tensors.push_back({"empty", {0}, {}});
  file.tensors.push_back({"bias", {2}, unit(2)});
  const std::string bytes = serialize(file);
  const auto back = deserialize(bytes);
  v.require(serialize(back) == bytes, "re-serialization differs");
  for (const auto& t : file.tensors) {
    const auto* u = back.find(t.name);
    v.require(u != nullptr && u->shape == t.shape, t.name + " lost");
    if (!u) continue;
    for (size_t i = 0; i < t.data.size(); ++i) {
      v.require(std::bit_cast<uint32_t>(u->data[i]) == std::bit_cast<uint32_t>(t.data[i]), t.name + " bits differ");
    }
  }
  if (v.ok) v.detail = fmt::format("max norm drift {:.1e}, max asymmetry {:.1e}", worst_norm, worst_sym);
  return v;
}

Verdict transpile_lite() {
  using namespace qvf::qsim;
  Verdict v;
  size_t circuits = 0, compared = 0;
  double worst = 0.0;
  for (const auto& backend : backend_registry()) {
    for (uint64_t seed = 0; seed < 100; ++seed) {
      const int width = 1 + static_cast<int>(seed % 5);
      const auto c = random_circuit("rc", width, 6, seed, false);
      const auto routed = transpile(c, backend, static_cast<int>(seed % 4));
      ++circuits;
      for (const auto& op : routed.circuit.ops()) {
        const auto* g = std::get_if<GateOp>(&op);
        if (!g || g->qubits.size() != 2) continue;
        const auto edge = std::minmax(g->qubits[0], g->qubits[1]);
        v.require(backend.coupling_map.count({edge.first, edge.second}) > 0,
                  fmt::format("{} seed {}: gate on ({}, {})", backend.id, seed, g->qubits[0], g->qubits[1]));
      }
      if (width > 3) continue;
      // Read the physical statevector back in virtual order and compare.
      const auto physical = simulate(routed.circuit);
      const auto logical = simulate(c);
      for (size_t x = 0; x < logical.size(); ++x) {
        size_t index = 0;
        for (int q = 0; q < width; ++q) {
          if (x >> q & 1) index |= size_t{1} << routed.final_layout[q];
        }
        worst = std::max(worst, std::abs(physical[index] - logical[x]));
      }
      ++compared;
    }
  }
  v.require(worst <= 1e-9, fmt::format("max amplitude error {}", worst));
  if (v.ok) v.detail = fmt::format("{} circuits routed, {} statevectors compared, max error {:.1e}", circuits, compared, worst);
  return v;
}

Verdict sandbox_robustness() {
  using namespace qvf::sandbox;
  Verdict v;
  auto families = qvf::synth::builtin_families();
  std::vector<const qvf::synth::TemplateFamily*> raw;
  for (const auto& f : families) raw.push_back(f.get());
  const auto tasks = qvf::synth::generate_dataset(raw, 12, 3);
  std::vector<std::vector<qvf::candidates::Candidate>> cands;
  qvf::candidates::MockOptions mock{0.5};
  for (const auto& t : tasks) {
    qvf::candidates::GenerationRequest req;
    req.n = 8;
    req.seed = 3;
    cands.push_back(qvf::candidates::mock_generate(t, req, mock));
  }
  const std::string hang = "random_circuit big 14 5000 seed=1 measure=true\nsampler j big shots=1024 seed=1\n";
  auto injected = cands;
  injected[5][3] =
      qvf::candidates::make_candidate(tasks[5].task_id, 3, qvf::candidates::format_completion(hang), "injected", 0);

  Sandbox sandbox;
  BatchOptions one{1, 10};
  BatchOptions eight{8, 10};
  const auto clean = verify_batch(tasks, cands, sandbox, one);
  const auto start = Clock::now();
  const auto dirty1 = verify_batch(tasks, injected, sandbox, one);
  const double hang_s = seconds_since(start);
  const auto dirty8 = verify_batch(tasks, injected, sandbox, eight);

  const size_t hung = 5 * 8 + 3;
  const auto& h = dirty1.samples[hung];
  v.require(h.execution_status == "timeout", "injected program finished with " + h.execution_status);
  v.require(h.rewards.r_quantum == 0.0 && h.bucket == 'B', "injected program was not scored 0");
  v.require(hang_s < 5.0, fmt::format("batch with the hang took {:.2f} s", hang_s));
  for (size_t i = 0; i < clean.samples.size(); ++i) {
    const auto j1 = to_json(dirty1.samples[i]);
    v.require(j1 == to_json(dirty8.samples[i]), "pool sizes 1 and 8 disagree on " + dirty1.samples[i].candidate_id);
    if (i != hung) v.require(j1 == to_json(clean.samples[i]), "sibling changed: " + clean.samples[i].candidate_id);
  }
  if (v.ok) v.detail = fmt::format("{} samples, hang contained in a {:.2f} s batch", clean.samples.size(), hang_s);
  return v;
}

}  // namespace

int main() {
  const fs::path work = fs::temp_directory_path() / ("qvf_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(work);

  criterion("estimator exactness", estimator_exactness);
  criterion("pass@k matches exhaustive subset enumeration", pass_at_k_oracle);
  criterion("reward definition", reward_definition);
  criterion("end-to-end determinism", [&] { return end_to_end_determinism(work); });
  criterion("DPO mining picks the most similar rejected sample", [&] { return dpo_mining(work); });
  criterion("GRPO math", grpo_math);
  criterion("SLERP merge and tensor container", slerp_properties);
  criterion("transpile-lite routing and equivalence", transpile_lite);
  criterion("sandbox robustness", sandbox_robustness);

  fs::remove_all(work);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
