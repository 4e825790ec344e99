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

#include <chrono>
#include <optional>
#include <stdexcept>

namespace qvf {

class TimeoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cooperative wall-clock budget. Long-running loops call check() and
/// unwind with TimeoutError once the budget is spent.
class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  static Deadline never() { return Deadline(); }
  static Deadline after(std::chrono::milliseconds budget) { return Deadline(Clock::now() + budget); }

  bool expired() const { return at_.has_value() && Clock::now() >= *at_; }

  void check() const {
    if (expired()) {
      throw TimeoutError("wall-clock budget exhausted");
    }
  }

 private:
  Deadline() = default;
  explicit Deadline(Clock::time_point at) : at_(at) {}

  std::optional<Clock::time_point> at_;
};

}  // namespace qvf
