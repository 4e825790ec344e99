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

#include <string>
#include <vector>

namespace qvf::qsim {

struct PauliTerm {
  /// Characters over {I,X,Y,Z}; the rightmost character acts on qubit 0.
  std::string label;
  double coeff = 0.0;

  bool operator==(const PauliTerm&) const = default;
};

/// Weighted sum of Pauli strings, all of the same width.
class Observable {
 public:
  explicit Observable(std::vector<PauliTerm> terms);

  const std::vector<PauliTerm>& terms() const { return terms_; }
  int num_qubits() const { return static_cast<int>(terms_.front().label.size()); }
  Observable scaled(double alpha) const;

  bool operator==(const Observable&) const = default;

 private:
  std::vector<PauliTerm> terms_;
};

}  // namespace qvf::qsim
