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

#include "qvf/candidates/source.h"

#include <atomic>
#include <exception>
#include <thread>

#include "httplib.h"
#include "qvf/common/hash.h"

namespace qvf::candidates {

using nlohmann::json;

std::string_view error_kind_name(GenerationError::Kind k) {
  switch (k) {
    case GenerationError::Kind::transport: return "transport";
    case GenerationError::Kind::schema: return "schema";
    case GenerationError::Kind::truncation: return "truncation";
  }
  return "?";
}

json generation_body(const GenerationRequest& req, const std::string& request_id) {
  return {{"id", request_id},
          {"prompt", req.prompt},
          {"n", req.n},
          {"temperature", req.temperature},
          {"max_tokens", req.max_tokens},
          {"seed", req.seed}};
}

std::vector<std::string> parse_generation_response(const json& body, int n, const std::string& request_id) {
  using K = GenerationError::Kind;
  if (!body.is_object()) throw GenerationError(K::schema, "generation response is not a JSON object");
  if (body.contains("id") && body["id"] != request_id)
    throw GenerationError(K::schema, "generation response id " + body["id"].dump() + " does not match " + request_id);
  auto it = body.find("completions");
  if (it == body.end() || !it->is_array())
    throw GenerationError(K::schema, "generation response lacks a 'completions' array");
  std::vector<std::string> out;
  for (const auto& c : *it) {
    if (!c.is_string()) throw GenerationError(K::schema, "completion is not a string");
    out.push_back(c.get<std::string>());
  }
  if (out.size() < static_cast<size_t>(n))
    throw GenerationError(K::truncation, "expected " + std::to_string(n) + " completions, got " +
                                             std::to_string(out.size()));
  if (out.size() > static_cast<size_t>(n))
    throw GenerationError(K::schema, "expected " + std::to_string(n) + " completions, got " +
                                         std::to_string(out.size()));
  return out;
}

std::vector<Candidate> http_generate(const HttpOptions& options, const GenerationRequest& req,
                                     const std::string& task_id, qlang::Dialect dialect) {
  using K = GenerationError::Kind;
  req.validate();
  httplib::Client client(options.endpoint);
  if (!client.is_valid()) throw GenerationError(K::transport, "invalid endpoint '" + options.endpoint + "'");
  const auto timeout = std::chrono::milliseconds(options.timeout_ms);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  const std::string body = generation_body(req, task_id).dump();
  std::string failure;
  for (int attempt = 0; attempt <= options.retries; ++attempt) {
    auto res = client.Post("/v1/generate", body, "application/json");
    if (!res) {
      failure = "POST /v1/generate: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      failure = "POST /v1/generate returned HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200)
      throw GenerationError(K::transport, "POST /v1/generate returned HTTP " + std::to_string(res->status));
    json parsed = json::parse(res->body, nullptr, false);
    if (parsed.is_discarded()) throw GenerationError(K::schema, "generation response is not valid JSON");
    std::vector<std::string> completions = parse_generation_response(parsed, req.n, task_id);
    std::vector<Candidate> out;
    for (int i = 0; i < req.n; ++i) {
      out.push_back(make_candidate(task_id, i, std::move(completions[static_cast<size_t>(i)]),
                                   std::string(kHttpGeneratorId), req.seed, dialect));
    }
    return out;
  }
  throw GenerationError(K::transport, failure);
}

std::vector<Candidate> MockSource::generate(const synth::Task& task, const GenerationRequest& req) const {
  return mock_generate(task, req, options_);
}

HttpSource::HttpSource(HttpOptions options) : options_(std::move(options)) {
  if (options_.max_in_flight < 1) throw std::invalid_argument("max_in_flight must be at least 1");
  if (options_.retries < 0) throw std::invalid_argument("retries must be non-negative");
  if (options_.timeout_ms <= 0) throw std::invalid_argument("timeout_ms must be positive");
}

std::vector<Candidate> HttpSource::generate(const synth::Task& task, const GenerationRequest& req) const {
  GenerationRequest r = req;
  r.prompt = task.prompt;
  r.seed = derive_seed(req.seed, fnv1a64(task.task_id));
  return http_generate(options_, r, task.task_id, task.reference.dialect);
}

namespace {

template <class Fn>
void for_each_task(size_t count, size_t max_in_flight, Fn fn) {
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next++; i < count; i = next++) fn(i);
  };
  const size_t workers = std::max<size_t>(1, std::min(max_in_flight, count));
  if (workers == 1) {
    work();
    return;
  }
  std::vector<std::thread> threads;
  for (size_t w = 0; w < workers; ++w) threads.emplace_back(work);
  for (auto& t : threads) t.join();
}

}  // namespace

std::vector<GenerationOutcome> generate_each(const CandidateSource& source, const std::vector<synth::Task>& tasks,
                                             const GenerationRequest& req) {
  req.validate();
  std::vector<GenerationOutcome> out(tasks.size());
  for_each_task(tasks.size(), source.max_in_flight(), [&](size_t i) {
    try {
      out[i].candidates = source.generate(tasks[i], req);
    } catch (const std::exception& e) {
      out[i].error = e.what();
    }
  });
  return out;
}

std::vector<std::vector<Candidate>> generate_all(const CandidateSource& source,
                                                 const std::vector<synth::Task>& tasks, const GenerationRequest& req) {
  req.validate();
  std::vector<std::vector<Candidate>> out(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  for_each_task(tasks.size(), source.max_in_flight(), [&](size_t i) {
    try {
      out[i] = source.generate(tasks[i], req);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace qvf::candidates
