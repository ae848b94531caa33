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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "twirlc/common.hpp"
#include "twirlc/hard_cycle.hpp"
#include "twirlc/kernels.hpp"
#include "twirlc/pauli.hpp"

namespace twirlc {

namespace gates {

inline Mat2 I() { return Mat2::Identity(); }
inline Mat2 X() { return pauli_matrix(Pauli::X); }
inline Mat2 Y() { return pauli_matrix(Pauli::Y); }
inline Mat2 Z() { return pauli_matrix(Pauli::Z); }
inline Mat2 H() {
  Mat2 m;
  const double s = 1.0 / std::numbers::sqrt2;
  m << s, s, s, -s;
  return m;
}

inline Mat2 rx(double theta) {
  Mat2 m;
  m << std::cos(theta / 2), -kI * std::sin(theta / 2), -kI * std::sin(theta / 2),
      std::cos(theta / 2);
  return m;
}
inline Mat2 ry(double theta) {
  Mat2 m;
  m << std::cos(theta / 2), -std::sin(theta / 2), std::sin(theta / 2), std::cos(theta / 2);
  return m;
}
inline Mat2 rz(double theta) {
  Mat2 m;
  m << std::exp(-kI * (theta / 2)), 0, 0, std::exp(kI * (theta / 2));
  return m;
}

/// SU(2) element Rz(phi) Ry(theta) Rz(lambda).
inline Mat2 euler(double phi, double theta, double lambda) {
  return rz(phi) * ry(theta) * rz(lambda);
}

/// Haar-random SU(2) element from a uniformly random unit quaternion.
template <class URBG>
Mat2 haar_su2(URBG& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  double a, b, c, d, norm;
  do {
    a = g(rng); b = g(rng); c = g(rng); d = g(rng);
    norm = std::sqrt(a * a + b * b + c * c + d * d);
  } while (norm < 1e-12);
  a /= norm; b /= norm; c /= norm; d /= norm;
  Mat2 m;
  m << Complex(a, b), Complex(c, d), Complex(-c, d), Complex(a, -b);
  return m;
}

inline Mat4 cnot() {
  Mat4 m = Mat4::Zero();
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
  return m;
}

}  // namespace gates

inline bool is_unitary(const MatrixC& u, double tol) { return is_unitary_matrix(u, tol); }

/// One round of single-qubit gates covering every qubit.
struct EasyCycle {
  std::vector<Mat2> gates;

  EasyCycle() = default;
  explicit EasyCycle(std::vector<Mat2> g) : gates(std::move(g)) {}

  static EasyCycle identity(int n) { return EasyCycle(std::vector<Mat2>(n, Mat2::Identity())); }
  static EasyCycle uniform(int n, const Mat2& g) { return EasyCycle(std::vector<Mat2>(n, g)); }

  int n() const { return static_cast<int>(gates.size()); }

  friend bool operator==(const EasyCycle& a, const EasyCycle& b) {
    if (a.gates.size() != b.gates.size()) return false;
    for (std::size_t i = 0; i < a.gates.size(); ++i)
      if (a.gates[i] != b.gates[i]) return false;
    return true;
  }
};

using Cycle = std::variant<EasyCycle, HardCycle>;

struct MeasurementSpec {
  int shots = 1024;  // computational basis only
  friend bool operator==(const MeasurementSpec&, const MeasurementSpec&) = default;
};

/// Circuit in canonical form [E0, H1, E1, ..., HM, EM].
struct Circuit {
  int n = 0;
  std::vector<Cycle> cycles;
  std::vector<int> measured_qubits;
  MeasurementSpec measurement;

  Circuit() = default;
  Circuit(int n_qubits, std::vector<Cycle> c) : n(n_qubits), cycles(std::move(c)) {
    measured_qubits.resize(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) measured_qubits[q] = q;
  }

  /// Number of hard cycles M (valid circuits only).
  int depth() const { return static_cast<int>(cycles.size() / 2); }

  const EasyCycle& easy(int k) const { return std::get<EasyCycle>(cycles.at(2 * k)); }
  EasyCycle& easy(int k) { return std::get<EasyCycle>(cycles.at(2 * k)); }
  /// Hard cycle k in 1..M.
  const HardCycle& hard(int k) const { return std::get<HardCycle>(cycles.at(2 * k - 1)); }

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

class CircuitError : public std::invalid_argument {
 public:
  CircuitError(const std::string& what, int cycle)
      : std::invalid_argument(cycle >= 0 ? "cycle " + std::to_string(cycle) + ": " + what : what),
        cycle_(cycle) {}
  int cycle() const { return cycle_; }

 private:
  int cycle_;
};

/// Throws CircuitError naming the first violated invariant.
inline void validate(const Circuit& c) {
  if (c.n < 1) throw CircuitError("qubit count must be >= 1", -1);
  if (c.cycles.empty()) throw CircuitError("no cycles", -1);
  for (std::size_t i = 0; i < c.cycles.size(); ++i) {
    const int idx = static_cast<int>(i);
    const bool want_easy = i % 2 == 0;
    if (std::holds_alternative<EasyCycle>(c.cycles[i]) != want_easy)
      throw CircuitError("non-alternating structure (expected " +
                             std::string(want_easy ? "easy" : "hard") + " cycle)",
                         idx);
    if (want_easy) {
      const auto& e = std::get<EasyCycle>(c.cycles[i]);
      if (e.n() != c.n)
        throw CircuitError("easy cycle covers " + std::to_string(e.n()) + " qubits, expected " +
                               std::to_string(c.n),
                           idx);
      for (int q = 0; q < e.n(); ++q)
        if (!is_unitary(e.gates[q], 1e-12))
          throw CircuitError("non-unitary gate on qubit " + std::to_string(q), idx);
    } else if (auto err = hard_cycle_violation(std::get<HardCycle>(c.cycles[i]), c.n);
               !err.empty()) {
      throw CircuitError(err, idx);
    }
  }
  if (c.cycles.size() % 2 == 0)
    throw CircuitError("non-alternating structure (circuit must end with an easy cycle)",
                       static_cast<int>(c.cycles.size()) - 1);
  std::vector<bool> seen(c.n, false);
  for (int q : c.measured_qubits) {
    if (q < 0 || q >= c.n) throw CircuitError("measured qubit " + std::to_string(q) + " out of range", -1);
    if (seen[q]) throw CircuitError("measured qubit " + std::to_string(q) + " listed twice", -1);
    seen[q] = true;
  }
  if (c.measurement.shots < 1) throw CircuitError("shot count must be >= 1", -1);
}

inline void apply_cycle(VectorC& psi, int n, const Cycle& cycle) {
  if (const auto* e = std::get_if<EasyCycle>(&cycle)) {
    for (int q = 0; q < n; ++q) kernels::apply_1q(psi, n, q, e->gates[q]);
  } else {
    const Mat4 cx = gates::cnot();
    for (const auto& g : std::get<HardCycle>(cycle).gates)
      kernels::apply_2q(psi, n, g.control, g.target, cx);
  }
}

/// Noiseless output state from |0...0>.
inline VectorC ideal_state(const Circuit& c) {
  if (c.n > kMaxDenseQubits)
    throw ResourceError("ideal_state: " + std::to_string(c.n) + " qubits exceeds cap");
  VectorC psi = VectorC::Zero(Eigen::Index{1} << c.n);
  psi[0] = 1;
  for (const auto& cy : c.cycles) apply_cycle(psi, c.n, cy);
  return psi;
}

/// Product of cycle unitaries in time order.
inline MatrixC ideal_unitary(const Circuit& c) {
  validate(c);
  if (c.n > kMaxDenseQubits)
    throw ResourceError("ideal_unitary: " + std::to_string(c.n) + " qubits exceeds the cap of " +
                        std::to_string(kMaxDenseQubits));
  const Eigen::Index dim = Eigen::Index{1} << c.n;
  MatrixC u(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    VectorC v = VectorC::Zero(dim);
    v[col] = 1;
    for (const auto& cy : c.cycles) apply_cycle(v, c.n, cy);
    u.col(col) = v;
  }
  return u;
}

/// Joins two circuits: the last easy cycle of `a` is merged with the first of `b`.
inline Circuit concatenate(const Circuit& a, const Circuit& b) {
  require(a.n == b.n, "concatenate: qubit count mismatch");
  Circuit out = a;
  auto& joint = std::get<EasyCycle>(out.cycles.back());
  const auto& first = std::get<EasyCycle>(b.cycles.front());
  for (int q = 0; q < a.n; ++q) joint.gates[q] = first.gates[q] * joint.gates[q];
  out.cycles.insert(out.cycles.end(), b.cycles.begin() + 1, b.cycles.end());
  return out;
}

/// Distribution used to sample hard layers.
enum class HardLayerDistribution {
  UniformLayers,     // uniform over all sets of disjoint ordered pairs, empty layer included
  PerfectMatchings,  // floor(n/2) CNOTs on a uniformly random pairing, random orientation
};

namespace detail {

// Number of sets of disjoint ordered pairs on m qubits.
inline double layer_count(int m) {
  double a0 = 1, a1 = 1;
  if (m <= 1) return 1;
  for (int k = 2; k <= m; ++k) {
    const double a2 = a1 + 2.0 * (k - 1) * a0;
    a0 = a1;
    a1 = a2;
  }
  return a1;
}

}  // namespace detail

template <class URBG>
HardCycle sample_hard_layer(int n, HardLayerDistribution dist, URBG& rng) {
  HardCycle h;
  std::vector<int> free(n);
  for (int q = 0; q < n; ++q) free[q] = q;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  if (dist == HardLayerDistribution::PerfectMatchings) {
    std::shuffle(free.begin(), free.end(), rng);
    for (int i = 0; i + 1 < n; i += 2) {
      const bool flip = coin(rng);
      h.gates.push_back(flip ? Cnot{free[i + 1], free[i]} : Cnot{free[i], free[i + 1]});
    }
    std::sort(h.gates.begin(), h.gates.end(),
              [](const Cnot& a, const Cnot& b) { return std::min(a.control, a.target) < std::min(b.control, b.target); });
    return h;
  }
  // Take the lowest free qubit; it stays unpaired with probability a(m-1)/a(m),
  // otherwise it pairs uniformly with another free qubit in a random orientation.
  while (!free.empty()) {
    const int m = static_cast<int>(free.size());
    const int q = free.front();
    free.erase(free.begin());
    if (u01(rng) * detail::layer_count(m) < detail::layer_count(m - 1)) continue;
    std::uniform_int_distribution<int> pick(0, m - 2);
    const int j = pick(rng);
    const int partner = free[j];
    free.erase(free.begin() + j);
    h.gates.push_back(coin(rng) ? Cnot{partner, q} : Cnot{q, partner});
  }
  return h;
}

enum class StructuredKind { A, B };

/// Circuit A repeats one all-X easy cycle and one fixed random full CNOT
/// matching; circuit B keeps the easy cycles and resamples every hard cycle.
template <class URBG>
Circuit gen_structured(StructuredKind kind, int n, int m, URBG& rng,
                       HardLayerDistribution b_dist = HardLayerDistribution::UniformLayers) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("gen_structured: qubit count must be even and >= 2, got " +
                                std::to_string(n));
  require(m >= 0, "gen_structured: negative cycle count");
  const EasyCycle easy = EasyCycle::uniform(n, gates::X());
  const HardCycle fixed = sample_hard_layer(n, HardLayerDistribution::PerfectMatchings, rng);
  std::vector<Cycle> cycles{easy};
  for (int k = 0; k < m; ++k) {
    if (kind == StructuredKind::A)
      cycles.emplace_back(fixed);
    else
      cycles.emplace_back(sample_hard_layer(n, b_dist, rng));
    cycles.emplace_back(easy);
  }
  return Circuit(n, std::move(cycles));
}

/// Haar-random single-qubit easy cycles alternating with random CNOT layers.
template <class URBG>
Circuit gen_uniform_random(int n, int m, URBG& rng,
                           HardLayerDistribution dist = HardLayerDistribution::UniformLayers) {
  require(n >= 2, "gen_uniform_random: need at least 2 qubits");
  require(m >= 0, "gen_uniform_random: negative cycle count");
  auto random_easy = [&] {
    EasyCycle e;
    e.gates.reserve(n);
    for (int q = 0; q < n; ++q) e.gates.push_back(gates::haar_su2(rng));
    return e;
  };
  std::vector<Cycle> cycles{random_easy()};
  for (int k = 0; k < m; ++k) {
    cycles.emplace_back(sample_hard_layer(n, dist, rng));
    cycles.emplace_back(random_easy());
  }
  return Circuit(n, std::move(cycles));
}

}  // namespace twirlc
