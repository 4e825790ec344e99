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

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qvf/candidates/candidate.h"
#include "qvf/candidates/mock.h"
#include "qvf/synth/task.h"

namespace qvf::candidates {

inline constexpr std::string_view kHttpGeneratorId = "http-gen/1";

class GenerationError : public std::runtime_error {
 public:
  enum class Kind { transport, schema, truncation };

  GenerationError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

std::string_view error_kind_name(GenerationError::Kind k);

struct HttpOptions {
  /// e.g. "http://127.0.0.1:8080".
  std::string endpoint;
  int timeout_ms = 30000;
  /// Extra attempts after a transport failure or a 5xx status.
  int retries = 2;
  size_t max_in_flight = 4;
};

/// Request body for POST /v1/generate.
nlohmann::json generation_body(const GenerationRequest& req, const std::string& request_id);

/// Validates a response body and returns exactly `n` completions.
std::vector<std::string> parse_generation_response(const nlohmann::json& body, int n, const std::string& request_id);

std::vector<Candidate> http_generate(const HttpOptions& options, const GenerationRequest& req,
                                     const std::string& task_id, qlang::Dialect dialect = qlang::Dialect::qlang);

class CandidateSource {
 public:
  virtual ~CandidateSource() = default;
  virtual std::string id() const = 0;
  /// Concurrent calls are allowed.
  virtual std::vector<Candidate> generate(const synth::Task& task, const GenerationRequest& req) const = 0;
  virtual size_t max_in_flight() const { return 1; }
};

class MockSource : public CandidateSource {
 public:
  explicit MockSource(MockOptions options) : options_(std::move(options)) {}
  std::string id() const override { return std::string(kMockGeneratorId); }
  std::vector<Candidate> generate(const synth::Task& task, const GenerationRequest& req) const override;

 private:
  MockOptions options_;
};

class HttpSource : public CandidateSource {
 public:
  explicit HttpSource(HttpOptions options);
  std::string id() const override { return std::string(kHttpGeneratorId); }
  /// Sends the task prompt with a per-task seed derived from req.seed and the task id.
  std::vector<Candidate> generate(const synth::Task& task, const GenerationRequest& req) const override;
  size_t max_in_flight() const override { return options_.max_in_flight; }

 private:
  HttpOptions options_;
};

struct GenerationOutcome {
  std::vector<Candidate> candidates;
  /// Set when generation for this task failed.
  std::optional<std::string> error;
};

/// Like generate_all, but a failing task only fails its own outcome.
std::vector<GenerationOutcome> generate_each(const CandidateSource& source, const std::vector<synth::Task>& tasks,
                                             const GenerationRequest& req);

/// Candidates for every task, in task order. Up to source.max_in_flight()
/// tasks are in flight at once; the first error is rethrown after all
/// in-flight work has finished, so callers never see a partial result.
std::vector<std::vector<Candidate>> generate_all(const CandidateSource& source,
                                                 const std::vector<synth::Task>& tasks, const GenerationRequest& req);

}  // namespace qvf::candidates
