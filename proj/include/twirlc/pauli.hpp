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

#include <array>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "twirlc/common.hpp"
#include "twirlc/hard_cycle.hpp"

namespace twirlc {

/// Single-qubit Pauli label. The numeric order I < X < Y < Z is the basis
/// order used by Pauli transfer matrices.
enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline bool pauli_x_bit(Pauli p) { return p == Pauli::X || p == Pauli::Y; }
inline bool pauli_z_bit(Pauli p) { return p == Pauli::Z || p == Pauli::Y; }

inline Pauli pauli_from_bits(bool x, bool z) {
  if (x) return z ? Pauli::Y : Pauli::X;
  return z ? Pauli::Z : Pauli::I;
}

inline char pauli_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

inline Mat2 pauli_matrix(Pauli p) {
  Mat2 m;
  switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, -kI, kI, 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

/// Fourth root of unity i^k, stored as k mod 4.
class Phase {
 public:
  constexpr Phase() = default;
  constexpr explicit Phase(int k) : k_(static_cast<std::uint8_t>(((k % 4) + 4) % 4)) {}

  static constexpr Phase one() { return Phase(0); }
  static constexpr Phase i() { return Phase(1); }
  static constexpr Phase minus_one() { return Phase(2); }
  static constexpr Phase minus_i() { return Phase(3); }

  constexpr int exponent() const { return k_; }
  constexpr Phase conj() const { return Phase(4 - k_); }
  constexpr bool is_real() const { return (k_ & 1) == 0; }

  Complex value() const {
    static constexpr std::array<double, 4> re{1, 0, -1, 0};
    static constexpr std::array<double, 4> im{0, 1, 0, -1};
    return {re[k_], im[k_]};
  }

  std::string str() const {
    static const std::array<const char*, 4> names{"+", "+i", "-", "-i"};
    return names[k_];
  }

  friend constexpr Phase operator*(Phase a, Phase b) { return Phase(a.k_ + b.k_); }
  friend constexpr bool operator==(Phase, Phase) = default;

 private:
  std::uint8_t k_ = 0;
};

/// Product of two single-qubit Paulis as (phase exponent, label).
inline std::pair<Phase, Pauli> multiply(Pauli a, Pauli b) {
  // Row a, column b: exponent k with a*b = i^k * (a xor b).
  static constexpr int table[4][4] = {
      {0, 0, 0, 0},  // I
      {0, 0, 1, 3},  // X: XY = iZ, XZ = -iY
      {0, 3, 0, 1},  // Y: YX = -iZ, YZ = iX
      {0, 1, 3, 0},  // Z: ZX = iY, ZY = -iX
  };
  const auto ia = static_cast<int>(a), ib = static_cast<int>(b);
  const bool x = pauli_x_bit(a) != pauli_x_bit(b);
  const bool z = pauli_z_bit(a) != pauli_z_bit(b);
  return {Phase(table[ia][ib]), pauli_from_bits(x, z)};
}

/// An n-qubit tensor product of Pauli labels; qubit 0 is leftmost.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(int n) : labels_(static_cast<size_t>(n), Pauli::I) {
    require(n >= 0, "PauliString: negative qubit count");
  }
  explicit PauliString(std::vector<Pauli> labels) : labels_(std::move(labels)) {}

  /// Parses "XIZY"; '_' is accepted as I.
  static PauliString parse(std::string_view text) {
    std::vector<Pauli> labels;
    labels.reserve(text.size());
    for (char c : text) {
      switch (c) {
        case 'I': case '_': labels.push_back(Pauli::I); break;
        case 'X': labels.push_back(Pauli::X); break;
        case 'Y': labels.push_back(Pauli::Y); break;
        case 'Z': labels.push_back(Pauli::Z); break;
        default:
          throw std::invalid_argument("invalid Pauli label '" + std::string(1, c) +
                                      "' in \"" + std::string(text) + "\"");
      }
    }
    return PauliString(std::move(labels));
  }

  static PauliString identity(int n) { return PauliString(n); }

  int n() const { return static_cast<int>(labels_.size()); }
  Pauli operator[](int q) const { return labels_[static_cast<size_t>(q)]; }
  Pauli& operator[](int q) { return labels_[static_cast<size_t>(q)]; }
  const std::vector<Pauli>& labels() const { return labels_; }

  bool is_identity() const {
    for (auto p : labels_)
      if (p != Pauli::I) return false;
    return true;
  }

  /// Weight: number of non-identity labels.
  int weight() const {
    int w = 0;
    for (auto p : labels_) w += p != Pauli::I;
    return w;
  }

  /// Index in the lexicographic I<X<Y<Z order with qubit 0 most significant.
  std::size_t index() const {
    std::size_t k = 0;
    for (auto p : labels_) k = 4 * k + static_cast<std::size_t>(p);
    return k;
  }

  static PauliString from_index(std::size_t k, int n) {
    PauliString s(n);
    for (int q = n - 1; q >= 0; --q) {
      s[q] = static_cast<Pauli>(k & 3u);
      k >>= 2;
    }
    return s;
  }

  /// True when the two strings commute.
  bool commutes_with(const PauliString& o) const {
    require(o.n() == n(), "commutes_with: qubit count mismatch");
    int anti = 0;
    for (int q = 0; q < n(); ++q) {
      const auto a = labels_[q], b = o.labels_[q];
      anti += a != Pauli::I && b != Pauli::I && a != b;
    }
    return anti % 2 == 0;
  }

  std::string str() const {
    std::string s;
    s.reserve(labels_.size());
    for (auto p : labels_) s.push_back(pauli_char(p));
    return s;
  }

  friend bool operator==(const PauliString&, const PauliString&) = default;
  friend bool operator<(const PauliString& a, const PauliString& b) {
    return a.labels_ < b.labels_;
  }

 private:
  std::vector<Pauli> labels_;
};

/// A Pauli string with an exact global phase in {+1, +i, -1, -i}.
struct PhasedPauli {
  Phase phase;
  PauliString pauli;

  PhasedPauli() = default;
  PhasedPauli(Phase ph, PauliString p) : phase(ph), pauli(std::move(p)) {}
  explicit PhasedPauli(PauliString p) : pauli(std::move(p)) {}

  int n() const { return pauli.n(); }

  PhasedPauli dagger() const { return {phase.conj(), pauli}; }

  /// Parses "[+|+i|-|-i]XIZY".
  static PhasedPauli parse(std::string_view text) {
    Phase ph;
    if (text.starts_with("+i")) {
      ph = Phase::i();
      text.remove_prefix(2);
    } else if (text.starts_with("-i")) {
      ph = Phase::minus_i();
      text.remove_prefix(2);
    } else if (text.starts_with("+")) {
      text.remove_prefix(1);
    } else if (text.starts_with("-")) {
      ph = Phase::minus_one();
      text.remove_prefix(1);
    }
    return {ph, PauliString::parse(text)};
  }

  std::string str() const { return phase.str() + pauli.str(); }

  friend bool operator==(const PhasedPauli&, const PhasedPauli&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const PauliString& p) {
  return os << p.str();
}
inline std::ostream& operator<<(std::ostream& os, const PhasedPauli& p) {
  return os << p.str();
}

inline PhasedPauli multiply(const PhasedPauli& a, const PhasedPauli& b) {
  if (a.n() != b.n())
    throw std::invalid_argument("multiply: qubit count mismatch (" +
                                std::to_string(a.n()) + " vs " +
                                std::to_string(b.n()) + ")");
  PhasedPauli out{a.phase * b.phase, PauliString(a.n())};
  for (int q = 0; q < a.n(); ++q) {
    auto [ph, p] = multiply(a.pauli[q], b.pauli[q]);
    out.phase = out.phase * ph;
    out.pauli[q] = p;
  }
  return out;
}

inline PhasedPauli operator*(const PhasedPauli& a, const PhasedPauli& b) {
  return multiply(a, b);
}

/// Dense 2^n x 2^n matrix, qubit 0 as the most significant tensor factor.
inline MatrixC to_matrix(const PhasedPauli& p) {
  const int n = p.n();
  if (n > kMaxDenseQubits)
    throw ResourceError("to_matrix: " + std::to_string(n) +
                        " qubits exceeds the dense cap of " +
                        std::to_string(kMaxDenseQubits));
  const std::size_t dim = std::size_t{1} << n;
  MatrixC m = MatrixC::Zero(static_cast<Eigen::Index>(dim),
                            static_cast<Eigen::Index>(dim));
  // Each column b has a single nonzero entry at row b ^ xmask.
  for (std::size_t b = 0; b < dim; ++b) {
    std::size_t row = b;
    Complex amp = p.phase.value();
    for (int q = 0; q < n; ++q) {
      const std::size_t bit = std::size_t{1} << (n - 1 - q);
      const bool one = (b & bit) != 0;
      switch (p.pauli[q]) {
        case Pauli::I: break;
        case Pauli::X: row ^= bit; break;
        case Pauli::Y: row ^= bit; amp *= one ? -kI : kI; break;
        case Pauli::Z: if (one) amp = -amp; break;
      }
    }
    m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(b)) = amp;
  }
  return m;
}

inline MatrixC to_matrix(const PauliString& p) { return to_matrix(PhasedPauli(p)); }

/// Uniform draw from the 4^n Pauli strings; labels are drawn per qubit.
template <class URBG>
PauliString sample_uniform(int n, URBG& rng) {
  require(n >= 1, "sample_uniform: n must be >= 1");
  std::uniform_int_distribution<int> label(0, 3);
  PauliString s(n);
  for (int q = 0; q < n; ++q) s[q] = static_cast<Pauli>(label(rng));
  return s;
}

/// G p G^dagger for a CNOT layer G, via the symplectic tableau rules.
inline PhasedPauli conjugate_by(const HardCycle& hard, PhasedPauli p) {
  for (const auto& g : hard.gates) {
    if (g.control >= p.n() || g.target >= p.n() || g.control < 0 || g.target < 0)
      throw std::invalid_argument("conjugate_by: cnot index out of range");
    bool xc = pauli_x_bit(p.pauli[g.control]), zc = pauli_z_bit(p.pauli[g.control]);
    bool xt = pauli_x_bit(p.pauli[g.target]), zt = pauli_z_bit(p.pauli[g.target]);
    if (xc && zt && (xt == zc)) p.phase = p.phase * Phase::minus_one();
    xt = xt != xc;
    zc = zc != zt;
    p.pauli[g.control] = pauli_from_bits(xc, zc);
    p.pauli[g.target] = pauli_from_bits(xt, zt);
  }
  return p;
}

/// Correction twirl G t^dagger G^dagger that cancels the twirl t through the
/// hard cycle G.
inline PhasedPauli correction_twirl(const HardCycle& hard, const PhasedPauli& t) {
  if (auto err = hard_cycle_violation(hard, t.n()); !err.empty())
    throw std::invalid_argument("correction_twirl: " + err);
  return conjugate_by(hard, t.dagger());
}

inline PhasedPauli correction_twirl(const HardCycle& hard, const PauliString& t) {
  return correction_twirl(hard, PhasedPauli(t));
}

}  // namespace twirlc
