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

#include "qvf/qsim/observable.h"

#include <cmath>

#include "qvf/qsim/circuit.h"

namespace qvf::qsim {

Observable::Observable(std::vector<PauliTerm> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) {
    throw CircuitError("observable needs at least one term");
  }
  const size_t width = terms_.front().label.size();
  for (const auto& t : terms_) {
    if (t.label.empty() || t.label.size() != width) {
      throw CircuitError("observable labels must be non-empty and of equal length");
    }
    for (char c : t.label) {
      if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
        throw CircuitError(std::string("invalid Pauli character '") + c + "' in label " + t.label);
      }
    }
    if (!std::isfinite(t.coeff)) {
      throw CircuitError("non-finite coefficient for " + t.label);
    }
  }
}

Observable Observable::scaled(double alpha) const {
  auto terms = terms_;
  for (auto& t : terms) {
    t.coeff *= alpha;
  }
  return Observable(std::move(terms));
}

}  // namespace qvf::qsim
