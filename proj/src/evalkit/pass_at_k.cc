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

#include "qvf/evalkit/pass_at_k.h"

#include <stdexcept>
#include <string>

namespace qvf::evalkit {

double pass_at_k(int n, int c, int k) {
  if (n < 1 || k < 1 || k > n) {
    throw std::invalid_argument("pass@k needs 1 <= k <= n, got n=" + std::to_string(n) + " k=" + std::to_string(k));
  }
  if (c < 0 || c > n) throw std::invalid_argument("pass@k needs 0 <= c <= n, got c=" + std::to_string(c));
  if (n - c < k) return 1.0;
  // C(n-c, k) / C(n, k) = prod_{i=n-c+1}^{n} (1 - k / i)
  double miss = 1.0;
  for (int i = n - c + 1; i <= n; ++i) miss *= 1.0 - static_cast<double>(k) / static_cast<double>(i);
  return 1.0 - miss;
}

}  // namespace qvf::evalkit
