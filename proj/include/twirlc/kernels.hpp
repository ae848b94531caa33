// Copyright 2026 The twirlc Authors
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

// In-place kernels on state vectors. Qubit 0 is the most significant bit of
// the basis index. A density matrix on n qubits is handled as a 2n-qubit
// vector with row qubits 0..n-1 and column qubits n..2n-1.

#include <cstddef>
#include <vector>

#include "twirlc/common.hpp"
#include "twirlc/pauli.hpp"

namespace twirlc::kernels {

inline std::size_t bit_of(int n, int q) { return std::size_t{1} << (n - 1 - q); }

inline void apply_1q(VectorC& psi, int n, int q, const Mat2& u) {
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t b = bit_of(n, q);
  Complex* d = psi.data();
  for (std::size_t i = 0; i < dim; ++i) {
    if (i & b) continue;
    const Complex a0 = d[i], a1 = d[i | b];
    d[i] = u(0, 0) * a0 + u(0, 1) * a1;
    d[i | b] = u(1, 0) * a0 + u(1, 1) * a1;
  }
}

/// Applies a 4x4 operator on (q0, q1); q0 is the high bit of its local index.
inline void apply_2q(VectorC& psi, int n, int q0, int q1, const Mat4& u) {
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t b0 = bit_of(n, q0), b1 = bit_of(n, q1);
  Complex* d = psi.data();
  for (std::size_t i = 0; i < dim; ++i) {
    if (i & (b0 | b1)) continue;
    const std::size_t idx[4] = {i, i | b1, i | b0, i | b0 | b1};
    Complex a[4];
    for (int k = 0; k < 4; ++k) a[k] = d[idx[k]];
    for (int r = 0; r < 4; ++r) {
      Complex s = 0;
      for (int c = 0; c < 4; ++c) s += u(r, c) * a[c];
      d[idx[r]] = s;
    }
  }
}

/// Bit masks describing the action P|b> = phase(b) |b ^ x>.
struct PauliMasks {
  std::size_t x = 0;
  std::size_t z = 0;
  Complex base{1.0, 0.0};  // global phase times i^(#Y)
};

inline PauliMasks pauli_masks(const PhasedPauli& p) {
  PauliMasks m;
  m.base = p.phase.value();
  const int n = p.n();
  for (int q = 0; q < n; ++q) {
    const std::size_t b = bit_of(n, q);
    switch (p.pauli[q]) {
      case Pauli::I: break;
      case Pauli::X: m.x |= b; break;
      case Pauli::Y: m.x |= b; m.z |= b; m.base *= kI; break;
      case Pauli::Z: m.z |= b; break;
    }
  }
  return m;
}

inline double parity_sign(std::size_t v) {
  return (__builtin_popcountll(static_cast<unsigned long long>(v)) & 1) ? -1.0 : 1.0;
}

/// out += coeff * P psi.
inline void add_pauli_action(VectorC& out, const VectorC& psi, const PauliMasks& m,
                             Complex coeff) {
  const std::size_t dim = static_cast<std::size_t>(psi.size());
  const Complex c = coeff * m.base;
  for (std::size_t b = 0; b < dim; ++b)
    out[static_cast<Eigen::Index>(b ^ m.x)] +=
        c * parity_sign(b & m.z) * psi[static_cast<Eigen::Index>(b)];
}

inline void apply_pauli(VectorC& psi, const PhasedPauli& p) {
  VectorC out = VectorC::Zero(psi.size());
  add_pauli_action(out, psi, pauli_masks(p), 1.0);
  psi.swap(out);
}

/// Probabilities of the computational basis restricted to `qubits` (first
/// listed qubit is the most significant outcome bit).
inline std::vector<double> marginal_probabilities(const std::vector<double>& full, int n,
                                                  const std::vector<int>& qubits) {
  const std::size_t k = qubits.size();
  std::vector<double> out(std::size_t{1} << k, 0.0);
  for (std::size_t i = 0; i < full.size(); ++i) {
    std::size_t o = 0;
    for (std::size_t j = 0; j < k; ++j) o = (o << 1) | ((i & bit_of(n, qubits[j])) ? 1u : 0u);
    out[o] += full[i];
  }
  return out;
}

inline std::vector<double> probabilities(const VectorC& psi) {
  std::vector<double> p(static_cast<std::size_t>(psi.size()));
  for (Eigen::Index i = 0; i < psi.size(); ++i) p[static_cast<std::size_t>(i)] = std::norm(psi[i]);
  return p;
}

/// Diagonal of a vectorized density matrix on n qubits.
inline std::vector<double> dm_probabilities(const VectorC& rho, int n) {
  const std::size_t dim = std::size_t{1} << n;
  std::vector<double> p(dim);
  for (std::size_t i = 0; i < dim; ++i) p[i] = rho[static_cast<Eigen::Index>(i * dim + i)].real();
  return p;
}

/// Vectorized |psi><psi|.
inline VectorC dm_from_state(const VectorC& psi) {
  const Eigen::Index dim = psi.size();
  VectorC rho(dim * dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) rho[r * dim + c] = psi[r] * std::conj(psi[c]);
  return rho;
}

inline void dm_apply_1q(VectorC& rho, int n, int q, const Mat2& u) {
  apply_1q(rho, 2 * n, q, u);
  apply_1q(rho, 2 * n, n + q, u.conjugate());
}

inline void dm_apply_2q(VectorC& rho, int n, int q0, int q1, const Mat4& u) {
  apply_2q(rho, 2 * n, q0, q1, u);
  apply_2q(rho, 2 * n, n + q0, n + q1, u.conjugate());
}

/// Single-qubit channel in superoperator form sum_k K (x) conj(K).
inline Mat4 kraus_superop(const std::vector<Mat2>& kraus) {
  Mat4 s = Mat4::Zero();
  for (const auto& k : kraus) {
    const Mat2 kc = k.conjugate();
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c)
          for (int d = 0; d < 2; ++d) s(2 * a + c, 2 * b + d) += k(a, b) * kc(c, d);
  }
  return s;
}

inline void dm_apply_channel_1q(VectorC& rho, int n, int q, const Mat4& superop) {
  apply_2q(rho, 2 * n, q, n + q, superop);
}

/// <psi| rho |psi> for a vectorized density matrix.
inline double dm_overlap(const VectorC& rho, const VectorC& psi) {
  const Eigen::Index dim = psi.size();
  Complex s = 0;
  for (Eigen::Index r = 0; r < dim; ++r) {
    if (psi[r] == Complex(0)) continue;
    Complex row = 0;
    for (Eigen::Index c = 0; c < dim; ++c) row += rho[r * dim + c] * psi[c];
    s += std::conj(psi[r]) * row;
  }
  return s.real();
}

}  // namespace twirlc::kernels
