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

// Dense reference implementations used as independent oracles by the tests.
// Nothing here calls into the library's simulators or channel code.

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using C = std::complex<double>;
using M = Eigen::MatrixXcd;
using V = Eigen::VectorXcd;

inline M pauli(char c) {
  M m(2, 2);
  switch (c) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, C(0, -1), C(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("oracle::pauli");
  }
  return m;
}

inline M kron(const M& a, const M& b) { return Eigen::kroneckerProduct(a, b).eval(); }

/// Leftmost character acts on the most significant tensor factor.
inline M pauli_string(const std::string& s) {
  M out = M::Identity(1, 1);
  for (char c : s) out = kron(out, pauli(c));
  return out;
}

inline M embed1(int n, int q, const M& g) {
  M out = M::Identity(1, 1);
  for (int k = 0; k < n; ++k) out = kron(out, k == q ? g : M::Identity(2, 2));
  return out;
}

/// CNOT as a permutation of computational basis states.
inline M cnot(int n, int c, int t) {
  const long dim = 1L << n;
  M out = M::Zero(dim, dim);
  for (long i = 0; i < dim; ++i) {
    const long cb = 1L << (n - 1 - c), tb = 1L << (n - 1 - t);
    const long j = (i & cb) ? (i ^ tb) : i;
    out(j, i) = 1;
  }
  return out;
}

inline std::string pauli_label(std::size_t index, int n) {
  std::string s(static_cast<std::size_t>(n), 'I');
  for (int q = n - 1; q >= 0; --q, index >>= 2) s[static_cast<std::size_t>(q)] = "IXYZ"[index & 3];
  return s;
}

/// R_ij = tr(P_i E(P_j)) / 2^n with E given by Kraus operators.
inline Eigen::MatrixXd ptm(const std::vector<M>& kraus) {
  const long dim = kraus.front().rows();
  const int n = static_cast<int>(std::lround(std::log2(static_cast<double>(dim))));
  const long d4 = dim * dim;
  Eigen::MatrixXd r(d4, d4);
  for (long j = 0; j < d4; ++j) {
    const M pj = pauli_string(pauli_label(static_cast<std::size_t>(j), n));
    M out = M::Zero(dim, dim);
    for (const auto& k : kraus) out += k * pj * k.adjoint();
    for (long i = 0; i < d4; ++i)
      r(i, j) = ((pauli_string(pauli_label(static_cast<std::size_t>(i), n)) * out).trace() / C(static_cast<double>(dim))).real();
  }
  return r;
}

/// Kraus operators of the Pauli-twirled channel: (1/2^n) P K P over all P, K.
inline std::vector<M> twirled_kraus(const std::vector<M>& kraus) {
  const long dim = kraus.front().rows();
  const int n = static_cast<int>(std::lround(std::log2(static_cast<double>(dim))));
  std::vector<M> out;
  for (std::size_t p = 0; p < (std::size_t{1} << (2 * n)); ++p) {
    const M pm = pauli_string(pauli_label(p, n));
    for (const auto& k : kraus) out.push_back(pm * k * pm / C(static_cast<double>(dim)));
  }
  return out;
}

/// System PTM of rho_S -> Tr_E[ sum_T (I (x) T) U (rho_E (x) T rho_S T) U^dag (I (x) T) ] / 4^n,
/// built from dense matrices and an explicit partial trace.
inline Eigen::MatrixXd reduced_twirl(const M& u, int n_sys, int env, const M& rho_e, bool twirl) {
  const long ds = 1L << n_sys, d4 = ds * ds;
  Eigen::MatrixXd r(d4, d4);
  for (long j = 0; j < d4; ++j) {
    const M pj = pauli_string(pauli_label(static_cast<std::size_t>(j), n_sys));
    M out_s = M::Zero(ds, ds);
    const long nt = twirl ? d4 : 1;
    for (long t = 0; t < nt; ++t) {
      const M tp = pauli_string(pauli_label(static_cast<std::size_t>(t), n_sys));
      const M te = kron(M::Identity(env, env), tp);
      const M joint = te * u * kron(rho_e, tp * pj * tp) * u.adjoint() * te;
      for (long a = 0; a < env; ++a) out_s += joint.block(a * ds, a * ds, ds, ds);
    }
    out_s /= static_cast<double>(nt);
    for (long i = 0; i < d4; ++i)
      r(i, j) = ((pauli_string(pauli_label(static_cast<std::size_t>(i), n_sys)) * out_s).trace() /
                 C(static_cast<double>(ds)))
                    .real();
  }
  return r;
}

/// Haar-random unitary via QR of a complex Ginibre matrix.
template <class R>
M random_unitary(long d, R& rng) {
  std::normal_distribution<double> g;
  M z(d, d);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) z(i, j) = C(g(rng), g(rng));
  Eigen::HouseholderQR<M> qr(z);
  M q = qr.householderQ();
  M r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (long i = 0; i < d; ++i) q.col(i) *= std::polar(1.0, std::arg(r(i, i)));
  return q;
}

template <class R>
M random_density(long d, R& rng) {
  std::normal_distribution<double> g;
  M z(d, d);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) z(i, j) = C(g(rng), g(rng));
  M rho = z * z.adjoint();
  return rho / rho.trace();
}

/// Random CPTP map with `rank` Kraus operators, cut from a Haar isometry.
template <class R>
std::vector<M> random_kraus(long d, int rank, R& rng) {
  const M u = random_unitary(d * rank, rng);
  std::vector<M> out;
  for (int k = 0; k < rank; ++k) out.push_back(u.block(k * d, 0, d, d));
  return out;
}

/// Exact probability of ending in the start state of the two-state chain,
/// by propagating the distribution round by round.
inline double markov_exact(const std::vector<double>& p) {
  double stay = 1.0;
  for (double pk : p) stay = stay * pk + (1 - stay) * (1 - pk);
  return stay;
}

inline double tvd(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

inline std::vector<double> probabilities(const V& psi) {
  std::vector<double> p(static_cast<std::size_t>(psi.size()));
  for (long i = 0; i < psi.size(); ++i) p[static_cast<std::size_t>(i)] = std::norm(psi[i]);
  return p;
}

inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) mx += std::log(x[i]) / n, my += std::log(y[i]) / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

}  // namespace oracle
