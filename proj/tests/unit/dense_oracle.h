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

// Test-only dense-matrix reference: builds full 2^n x 2^n operators from
// Kronecker products, independent of the simulator's in-place kernels.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

namespace qvf::oracle {

using C = std::complex<double>;
using Mat = std::vector<std::vector<C>>;
using Vec = std::vector<C>;

inline Mat identity(size_t n) {
  Mat m(n, std::vector<C>(n, 0.0));
  for (size_t i = 0; i < n; ++i) m[i][i] = 1.0;
  return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
  const size_t ra = a.size(), rb = b.size();
  Mat m(ra * rb, std::vector<C>(ra * rb, 0.0));
  for (size_t i = 0; i < ra; ++i)
    for (size_t j = 0; j < ra; ++j)
      for (size_t k = 0; k < rb; ++k)
        for (size_t l = 0; l < rb; ++l) m[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
  return m;
}

inline Mat matmul(const Mat& a, const Mat& b) {
  const size_t n = a.size();
  Mat m(n, std::vector<C>(n, 0.0));
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < n; ++k)
      for (size_t j = 0; j < n; ++j) m[i][j] += a[i][k] * b[k][j];
  return m;
}

inline Vec apply(const Mat& m, const Vec& v) {
  Vec out(v.size(), 0.0);
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
  return out;
}

inline Mat pauli(char c) {
  const C i{0.0, 1.0};
  switch (c) {
    case 'X': return {{0.0, 1.0}, {1.0, 0.0}};
    case 'Y': return {{0.0, -i}, {i, 0.0}};
    case 'Z': return {{1.0, 0.0}, {0.0, -1.0}};
    default: return identity(2);
  }
}

// Label string is written most-significant qubit first, so kron in label order.
inline Mat pauli_string(const std::string& label) {
  Mat m = {{1.0}};
  for (char c : label) m = kron(m, pauli(c));
  return m;
}

// Single-qubit operator u on qubit q of an n-qubit register (qubit 0 = LSB).
inline Mat on_qubit(const Mat& u, int q, int n) {
  Mat m = {{1.0}};
  for (int k = n - 1; k >= 0; --k) m = kron(m, k == q ? u : identity(2));
  return m;
}

// Controlled-u with control c and target t: |0><0|_c (x) I + |1><1|_c (x) u_t.
inline Mat controlled(const Mat& u, int c, int t, int n) {
  const Mat p0 = {{1.0, 0.0}, {0.0, 0.0}};
  const Mat p1 = {{0.0, 0.0}, {0.0, 1.0}};
  Mat a = {{1.0}}, b = {{1.0}};
  for (int k = n - 1; k >= 0; --k) {
    a = kron(a, k == c ? p0 : identity(2));
    b = kron(b, k == c ? p1 : (k == t ? u : identity(2)));
  }
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a.size(); ++j) a[i][j] += b[i][j];
  return a;
}

inline Mat hadamard() {
  const double r = 1.0 / std::numbers::sqrt2;
  return {{r, r}, {r, -r}};
}

inline C expectation(const Vec& psi, const Mat& op) {
  Vec phi = apply(op, psi);
  C acc = 0.0;
  for (size_t i = 0; i < psi.size(); ++i) acc += std::conj(psi[i]) * phi[i];
  return acc;
}

}  // namespace qvf::oracle
