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

// Channels in the Pauli-transfer-matrix picture. The basis is the normalized
// Pauli strings P / sqrt(2^n), ordered lexicographically with I < X < Y < Z
// per qubit and qubit 0 most significant, so unitary channels have orthogonal
// PTMs.

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "twirlc/common.hpp"
#include "twirlc/pauli.hpp"

namespace twirlc {

inline constexpr int kMaxPtmQubits = 5;
// Above this size twirl_average zeroes off-diagonals instead of summing 4^n terms.
inline constexpr int kExactTwirlMaxQubits = 3;

namespace detail {

inline std::size_t pow4(int n) { return std::size_t{1} << (2 * n); }

inline int qubits_for_dim(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) throw std::invalid_argument("dimension is not a power of two");
  return n;
}

// Tr(P M) for a Pauli string P using its monomial structure.
inline Complex trace_pauli_product(const PauliString& p, const MatrixC& m) {
  const int n = p.n();
  const std::size_t dim = std::size_t{1} << n;
  std::size_t xmask = 0, zmask = 0;
  Complex base = 1;
  for (int q = 0; q < n; ++q) {
    const std::size_t b = std::size_t{1} << (n - 1 - q);
    if (pauli_x_bit(p[q])) xmask |= b;
    if (pauli_z_bit(p[q])) zmask |= b;
    if (p[q] == Pauli::Y) base *= kI;
  }
  Complex s = 0;
  // P|c> = base * (-1)^{popcount(c & z)} |c ^ x>, so Tr(PM) = sum_c P_{c^x,c} M_{c,c^x}.
  for (std::size_t c = 0; c < dim; ++c) {
    const double sign = (__builtin_popcountll(c & zmask) & 1) ? -1.0 : 1.0;
    s += sign * m(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c ^ xmask));
  }
  return base * s;
}

}  // namespace detail

/// Real 4^n x 4^n Pauli transfer matrix of a channel.
class SuperOp {
 public:
  SuperOp() = default;
  SuperOp(int n, MatrixR m) : n_(n), m_(std::move(m)) {
    require(n >= 0, "SuperOp: negative qubit count");
    const auto d = static_cast<Eigen::Index>(detail::pow4(n));
    require(m_.rows() == d && m_.cols() == d, "SuperOp: matrix must be 4^n x 4^n");
  }

  static SuperOp identity(int n) {
    const auto d = static_cast<Eigen::Index>(detail::pow4(n));
    return SuperOp(n, MatrixR::Identity(d, d));
  }

  int n() const { return n_; }
  const MatrixR& matrix() const { return m_; }
  double operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }

  /// First row equal to e_1.
  bool is_trace_preserving(double tol = 1e-10) const {
    MatrixR row = m_.row(0);
    row(0) -= 1.0;
    return row.cwiseAbs().maxCoeff() <= tol;
  }

  /// Choi operator sum_ij R_ij P_j^T (x) P_i, in normalized-Pauli convention.
  MatrixC choi() const {
    const std::size_t d4 = detail::pow4(n_);
    const Eigen::Index dim = Eigen::Index{1} << n_;
    MatrixC j = MatrixC::Zero(dim * dim, dim * dim);
    const double norm = 1.0 / static_cast<double>(dim);
    std::vector<MatrixC> basis(d4);
    for (std::size_t k = 0; k < d4; ++k) basis[k] = to_matrix(PauliString::from_index(k, n_));
    for (std::size_t i = 0; i < d4; ++i)
      for (std::size_t c = 0; c < d4; ++c) {
        const double r = m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
        if (r == 0.0) continue;
        j += (r * norm) * Eigen::kroneckerProduct(basis[c].transpose(), basis[i]).eval();
      }
    return j;
  }

  /// Completely positive when the Choi operator has eigenvalues >= -tol.
  bool is_completely_positive(double tol = 1e-10) const {
    Eigen::SelfAdjointEigenSolver<MatrixC> es(choi(), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
  }

  /// Channel composition: (a * b) applies b first.
  friend SuperOp operator*(const SuperOp& a, const SuperOp& b) {
    require(a.n_ == b.n_, "SuperOp composition: qubit count mismatch");
    return SuperOp(a.n_, a.m_ * b.m_);
  }

  /// Applies the channel to a density matrix.
  MatrixC apply(const MatrixC& rho) const;

 private:
  int n_ = 0;
  MatrixR m_ = MatrixR::Identity(1, 1);
};

/// Coefficients of rho in the normalized Pauli basis.
inline VectorR pauli_vector(const MatrixC& rho) {
  const int n = detail::qubits_for_dim(rho.rows());
  const std::size_t d4 = detail::pow4(n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(rho.rows()));
  VectorR v(static_cast<Eigen::Index>(d4));
  for (std::size_t k = 0; k < d4; ++k)
    v[static_cast<Eigen::Index>(k)] = (detail::trace_pauli_product(PauliString::from_index(k, n), rho) * norm).real();
  return v;
}

inline MatrixC from_pauli_vector(const VectorR& v, int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
  MatrixC rho = MatrixC::Zero(dim, dim);
  for (Eigen::Index k = 0; k < v.size(); ++k)
    if (v[k] != 0.0) rho += (v[k] * norm) * to_matrix(PauliString::from_index(static_cast<std::size_t>(k), n));
  return rho;
}

inline MatrixC SuperOp::apply(const MatrixC& rho) const {
  return from_pauli_vector(m_ * pauli_vector(rho), n_);
}

/// PTM of rho -> f(rho), evaluated on each normalized basis element.
template <class Map>
SuperOp ptm_from_map(int n, Map&& f) {
  if (n > kMaxPtmQubits)
    throw ResourceError("PTM construction limited to " + std::to_string(kMaxPtmQubits) + " qubits");
  const std::size_t d4 = detail::pow4(n);
  const double norm = 1.0 / static_cast<double>(std::size_t{1} << n);
  std::vector<PauliString> basis;
  basis.reserve(d4);
  for (std::size_t k = 0; k < d4; ++k) basis.push_back(PauliString::from_index(k, n));
  MatrixR r(static_cast<Eigen::Index>(d4), static_cast<Eigen::Index>(d4));
  for (std::size_t j = 0; j < d4; ++j) {
    const MatrixC out = f(to_matrix(basis[j]));
    for (std::size_t i = 0; i < d4; ++i)
      r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          (detail::trace_pauli_product(basis[i], out) * norm).real();
  }
  return SuperOp(n, std::move(r));
}

inline SuperOp ptm_from_unitary(const MatrixC& u) {
  const int n = detail::qubits_for_dim(u.rows());
  if (!is_unitary_matrix(u)) throw std::invalid_argument("ptm_from_unitary: matrix is not unitary");
  const MatrixC ud = u.adjoint();
  return ptm_from_map(n, [&](const MatrixC& p) -> MatrixC { return u * p * ud; });
}

inline bool kraus_is_trace_preserving(const std::vector<MatrixC>& ops, double tol = 1e-10) {
  if (ops.empty()) return false;
  MatrixC s = MatrixC::Zero(ops[0].cols(), ops[0].cols());
  for (const auto& k : ops) s += k.adjoint() * k;
  return (s - MatrixC::Identity(s.rows(), s.cols())).cwiseAbs().maxCoeff() <= tol;
}

inline SuperOp ptm_from_kraus(const std::vector<MatrixC>& ops) {
  require(!ops.empty(), "ptm_from_kraus: empty Kraus set");
  for (const auto& k : ops)
    require(k.rows() == ops[0].rows() && k.cols() == ops[0].cols() && k.rows() == k.cols(),
            "ptm_from_kraus: Kraus operators must share a square shape");
  if (!kraus_is_trace_preserving(ops))
    throw std::invalid_argument("ptm_from_kraus: sum K^dagger K != I (not trace preserving)");
  const int n = detail::qubits_for_dim(ops[0].rows());
  return ptm_from_map(n, [&](const MatrixC& p) -> MatrixC {
    MatrixC out = MatrixC::Zero(p.rows(), p.cols());
    for (const auto& k : ops) out += k * p * k.adjoint();
    return out;
  });
}

/// Character table C_ij = sum_T s_T(i) s_T(j) over all 4^n Pauli twirls, where
/// s_T(i) = +1 if T commutes with basis Pauli i and -1 otherwise.
inline Eigen::MatrixXi twirl_character_sums(int n) {
  const std::size_t d4 = detail::pow4(n);
  std::vector<PauliString> basis;
  for (std::size_t k = 0; k < d4; ++k) basis.push_back(PauliString::from_index(k, n));
  Eigen::MatrixXi c = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(d4), static_cast<Eigen::Index>(d4));
  std::vector<int> s(d4);
  for (std::size_t t = 0; t < d4; ++t) {
    for (std::size_t i = 0; i < d4; ++i) s[i] = basis[t].commutes_with(basis[i]) ? 1 : -1;
    for (std::size_t i = 0; i < d4; ++i)
      for (std::size_t j = 0; j < d4; ++j)
        c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += s[i] * s[j];
  }
  return c;
}

namespace detail {

inline const Eigen::MatrixXi& cached_characters(int n) {
  static const std::vector<Eigen::MatrixXi> cache = [] {
    std::vector<Eigen::MatrixXi> v;
    for (int k = 0; k <= kExactTwirlMaxQubits; ++k) v.push_back(twirl_character_sums(k));
    return v;
  }();
  return cache.at(static_cast<std::size_t>(n));
}

// Applies the 4^n-term twirl average to a (possibly complex) block.
template <class Mat>
Mat twirl_block_exact(const Mat& e, int n) {
  const auto& c = cached_characters(n);
  const double terms = static_cast<double>(pow4(n));
  Mat out(e.rows(), e.cols());
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j)
      out(i, j) = c(i, j) == 0 ? typename Mat::Scalar(0)
                               : e(i, j) * (static_cast<double>(c(i, j)) / terms);
  return out;
}

template <class Mat>
Mat diagonal_projection(const Mat& e) {
  Mat out = Mat::Zero(e.rows(), e.cols());
  out.diagonal() = e.diagonal();
  return out;
}

}  // namespace detail

/// Exact uniform average of T^dagger E T over the 4^n Pauli twirls T.
inline SuperOp twirl_average_exact(const SuperOp& e) {
  require(e.n() <= kExactTwirlMaxQubits, "twirl_average_exact: too many qubits");
  return SuperOp(e.n(), detail::twirl_block_exact(e.matrix(), e.n()));
}

/// Same result via the diagonal-projection identity.
inline SuperOp twirl_average_projection(const SuperOp& e) {
  return SuperOp(e.n(), detail::diagonal_projection(e.matrix()));
}

inline SuperOp twirl_average(const SuperOp& e) {
  return e.n() <= kExactTwirlMaxQubits ? twirl_average_exact(e) : twirl_average_projection(e);
}

struct PauliCheck {
  bool is_pauli = false;
  double offdiag_norm = 0.0;  // Frobenius norm of the off-diagonal part
};

inline PauliCheck is_pauli_channel(const SuperOp& e, double tol = 1e-10) {
  MatrixR off = e.matrix();
  off.diagonal().setZero();
  const double max_abs = off.size() ? off.cwiseAbs().maxCoeff() : 0.0;
  return {max_abs <= tol, off.norm()};
}

struct FidelityMetrics {
  double average_gate_fidelity = 1.0;
  double process_fidelity = 1.0;
};

inline FidelityMetrics fidelity_metrics(const SuperOp& e) {
  const double d = static_cast<double>(std::size_t{1} << e.n());
  const double tr = e.matrix().trace();
  return {(tr + d) / (d * d + d), tr / (d * d)};
}

/// Stochastic Pauli channel rho -> sum_P c_P P rho P.
class PauliChannel {
 public:
  PauliChannel() = default;
  PauliChannel(int n, VectorR probs) : n_(n), probs_(std::move(probs)) {
    require(probs_.size() == static_cast<Eigen::Index>(detail::pow4(n)), "PauliChannel: need 4^n probabilities");
  }

  static PauliChannel depolarizing(int n, double p) {
    const auto d4 = static_cast<Eigen::Index>(detail::pow4(n));
    VectorR c = VectorR::Constant(d4, p / static_cast<double>(d4));
    c[0] += 1.0 - p;
    return PauliChannel(n, c);
  }

  /// Inverse Walsh-Hadamard transform of a diagonal PTM: c_P = 4^-n sum_Q s(P,Q) lambda_Q.
  static PauliChannel from_superop(const SuperOp& e) {
    const int n = e.n();
    const std::size_t d4 = detail::pow4(n);
    VectorR c = VectorR::Zero(static_cast<Eigen::Index>(d4));
    for (std::size_t p = 0; p < d4; ++p) {
      const auto ps = PauliString::from_index(p, n);
      double s = 0;
      for (std::size_t q = 0; q < d4; ++q)
        s += (ps.commutes_with(PauliString::from_index(q, n)) ? 1.0 : -1.0) *
             e(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(q));
      c[static_cast<Eigen::Index>(p)] = s / static_cast<double>(d4);
    }
    return PauliChannel(n, c);
  }

  SuperOp to_superop() const {
    const std::size_t d4 = detail::pow4(n_);
    MatrixR m = MatrixR::Zero(static_cast<Eigen::Index>(d4), static_cast<Eigen::Index>(d4));
    for (std::size_t q = 0; q < d4; ++q) {
      const auto qs = PauliString::from_index(q, n_);
      double s = 0;
      for (std::size_t p = 0; p < d4; ++p)
        s += (qs.commutes_with(PauliString::from_index(p, n_)) ? 1.0 : -1.0) * probs_[static_cast<Eigen::Index>(p)];
      m(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(q)) = s;
    }
    return SuperOp(n_, m);
  }

  int n() const { return n_; }
  const VectorR& probs() const { return probs_; }
  double prob(const PauliString& p) const { return probs_[static_cast<Eigen::Index>(p.index())]; }

  bool is_valid(double tol = 1e-12) const {
    return probs_.minCoeff() >= -tol && std::abs(probs_.sum() - 1.0) <= tol;
  }

 private:
  int n_ = 0;
  VectorR probs_ = VectorR::Ones(1);
};

/// Joint channel on environment (x) system, in the basis |a><b| (x) P_i with
/// environment matrix units outer and normalized system Paulis inner. Block
/// (alpha, beta) is the 4^n x 4^n map between environment units alpha and beta,
/// with alpha = a * d + b.
class JointChannel {
 public:
  JointChannel() = default;
  JointChannel(int n_sys, int env_dim, MatrixC m) : n_(n_sys), d_(env_dim), m_(std::move(m)) {
    require(n_sys >= 1 && env_dim >= 1, "JointChannel: bad dimensions");
    require(m_.rows() == size() && m_.cols() == size(), "JointChannel: matrix has wrong shape");
  }

  /// From a joint map on (d * 2^n)-dimensional operators.
  template <class Map>
  static JointChannel from_map(int n_sys, int env_dim, Map&& f) {
    if (n_sys > 3) throw ResourceError("JointChannel: at most 3 system qubits");
    const std::size_t d4 = detail::pow4(n_sys);
    const Eigen::Index ds = Eigen::Index{1} << n_sys;
    const double norm = 1.0 / std::sqrt(static_cast<double>(ds));
    std::vector<PauliString> basis;
    std::vector<MatrixC> pm;
    for (std::size_t k = 0; k < d4; ++k) {
      basis.push_back(PauliString::from_index(k, n_sys));
      pm.push_back(to_matrix(basis.back()) * norm);
    }
    const Eigen::Index d = env_dim;
    const Eigen::Index total = d * d * static_cast<Eigen::Index>(d4);
    MatrixC m(total, total);
    for (Eigen::Index beta = 0; beta < d * d; ++beta) {
      const Eigen::Index a1 = beta / d, b1 = beta % d;
      for (std::size_t j = 0; j < d4; ++j) {
        MatrixC x = MatrixC::Zero(d * ds, d * ds);
        x.block(a1 * ds, b1 * ds, ds, ds) = pm[j];
        const MatrixC y = f(x);
        const Eigen::Index col = beta * static_cast<Eigen::Index>(d4) + static_cast<Eigen::Index>(j);
        for (Eigen::Index alpha = 0; alpha < d * d; ++alpha) {
          const Eigen::Index a = alpha / d, b = alpha % d;
          const MatrixC sub = y.block(a * ds, b * ds, ds, ds);
          for (std::size_t i = 0; i < d4; ++i)
            m(alpha * static_cast<Eigen::Index>(d4) + static_cast<Eigen::Index>(i), col) =
                detail::trace_pauli_product(basis[i], sub) * norm;
        }
      }
    }
    return JointChannel(n_sys, env_dim, std::move(m));
  }

  /// Unitary on environment (x) system, environment as the high-order factor.
  static JointChannel from_unitary(const MatrixC& u, int n_sys, int env_dim) {
    require(u.rows() == (Eigen::Index{env_dim} << n_sys), "JointChannel::from_unitary: dimension mismatch");
    if (!is_unitary_matrix(u)) throw std::invalid_argument("JointChannel::from_unitary: not unitary");
    const MatrixC ud = u.adjoint();
    return from_map(n_sys, env_dim, [&](const MatrixC& x) -> MatrixC { return u * x * ud; });
  }

  int n_sys() const { return n_; }
  int env_dim() const { return d_; }
  Eigen::Index block_size() const { return static_cast<Eigen::Index>(detail::pow4(n_)); }
  Eigen::Index blocks_per_side() const { return Eigen::Index{d_} * d_; }
  Eigen::Index size() const { return blocks_per_side() * block_size(); }
  const MatrixC& matrix() const { return m_; }

  MatrixC block(Eigen::Index alpha, Eigen::Index beta) const {
    const Eigen::Index s = block_size();
    return m_.block(alpha * s, beta * s, s, s);
  }

 private:
  int n_ = 1;
  int d_ = 1;
  MatrixC m_;
};

/// Twirls the system part of every block: I_E (x) T with T uniform over Paulis.
inline JointChannel block_twirl(const JointChannel& j) {
  const Eigen::Index s = j.block_size();
  MatrixC out(j.size(), j.size());
  for (Eigen::Index a = 0; a < j.blocks_per_side(); ++a)
    for (Eigen::Index b = 0; b < j.blocks_per_side(); ++b) {
      const MatrixC blk = j.block(a, b);
      out.block(a * s, b * s, s, s) = j.n_sys() <= kExactTwirlMaxQubits
                                          ? detail::twirl_block_exact(blk, j.n_sys())
                                          : detail::diagonal_projection(blk);
    }
  return JointChannel(j.n_sys(), j.env_dim(), std::move(out));
}

inline bool is_density_matrix(const MatrixC& rho, double tol = 1e-10) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) return false;
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  if (std::abs(rho.trace() - Complex(1.0)) > tol) return false;
  Eigen::SelfAdjointEigenSolver<MatrixC> es(rho, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

/// System channel rho_S -> Tr_E[ J(rho_E (x) rho_S) ].
inline SuperOp reduce_to_system(const JointChannel& j, const MatrixC& env_state) {
  if (env_state.rows() != j.env_dim() || !is_density_matrix(env_state))
    throw std::invalid_argument("reduce_to_system: environment state is not a valid " +
                                std::to_string(j.env_dim()) + "-dimensional density matrix");
  const Eigen::Index d = j.env_dim();
  const Eigen::Index s = j.block_size();
  MatrixC acc = MatrixC::Zero(s, s);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index beta = 0; beta < d * d; ++beta) {
      const Complex c = env_state(beta / d, beta % d);
      if (c == Complex(0)) continue;
      acc += c * j.block(a * d + a, beta);
    }
  return SuperOp(j.n_sys(), acc.real());
}

}  // namespace twirlc
