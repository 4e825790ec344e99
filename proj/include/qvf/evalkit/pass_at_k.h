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

namespace qvf::evalkit {

/// Unbiased pass@k: 1 - C(n-c, k) / C(n, k), as a running product.
/// Throws std::invalid_argument unless 1 <= k <= n and 0 <= c <= n.
double pass_at_k(int n, int c, int k);

}  // namespace qvf::evalkit
