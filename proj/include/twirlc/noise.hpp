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

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "twirlc/circuit.hpp"
#include "twirlc/distribution.hpp"
#include "twirlc/kernels.hpp"
#include "twirlc/rc.hpp"

namespace twirlc {

// Density-matrix simulation stores 4^n amplitudes.
inline constexpr int kMaxDensityQubits = 8;

/// u = phase * exp(-i theta/2 axis.sigma) with theta in [0, pi]. At theta = pi
/// the axis is chosen with its first nonzero component positive.
struct AxisAngle {
  Complex phase{1.0, 0.0};
  double theta = 0.0;
  Eigen::Vector3d axis{0.0, 0.0, 1.0};
};

inline AxisAngle axis_angle(const Mat2& u) {
  AxisAngle out;
  Complex ph = std::sqrt(u.determinant());
  Mat2 v = u / ph;
  double a = (v.trace() / 2.0).real();
  if (a < 0) {
    v = -v;
    ph = -ph;
    a = -a;
  }
  Eigen::Vector3d b;
  b[0] = (kI * (v * pauli_matrix(Pauli::X)).trace() / 2.0).real();
  b[1] = (kI * (v * pauli_matrix(Pauli::Y)).trace() / 2.0).real();
  b[2] = (kI * (v * pauli_matrix(Pauli::Z)).trace() / 2.0).real();
  const double s = b.norm();
  if (a < 1e-14) {
    for (int k = 0; k < 3; ++k) {
      if (std::abs(b[k]) < 1e-14) continue;
      if (b[k] < 0) {
        b = -b;
        ph = -ph;
      }
      break;
    }
  }
  out.phase = ph;
  out.theta = 2.0 * std::atan2(s, a);
  if (s > 0) out.axis = b / s;
  return out;
}

inline Mat2 rotation(double theta, const Eigen::Vector3d& axis) {
  const Mat2 ns = axis[0] * pauli_matrix(Pauli::X) + axis[1] * pauli_matrix(Pauli::Y) +
                  axis[2] * pauli_matrix(Pauli::Z);
  return std::cos(theta / 2) * Mat2::Identity() - kI * std::sin(theta / 2) * ns;
}

/// u^(1+eps): the rotation angle of u scaled by (1+eps) about the same axis.
inline Mat2 overrotate(const Mat2& u, double eps) {
  const AxisAngle r = axis_angle(u);
  return r.phase * rotation((1.0 + eps) * r.theta, r.axis);
}

/// CNOT^(1+eps) from the generator: CNOT = exp(i pi |1><1| (x) |-><-|).
inline Mat4 cnot_overrotated(double eps) {
  Eigen::Vector4cd v;
  const double s = std::numbers::sqrt2 / 2;
  v << 0, 0, s, -s;  // |1>|->
  const Complex f = std::exp(kI * (std::numbers::pi * (1.0 + eps))) - 1.0;
  return Mat4::Identity() + f * v * v.adjoint();
}

/// Gate-dependent coherent overrotation U -> U^(1+eps).
struct OverrotationModel {
  double eps_easy = 0.0;
  double eps_hard = 0.0;
};

/// Amplitude damping plus pure dephasing, attached once per cycle.
struct DecoherenceModel {
  double t1 = 50e-6;
  double t2 = 50e-6;
  double t_single = 25e-9;
  double t_double = 100e-9;

  void validate() const {
    require(t1 > 0 && t2 > 0, "DecoherenceModel: T1 and T2 must be positive");
    require(t2 <= 2 * t1 * (1 + 1e-12), "DecoherenceModel: requires T2 <= 2 T1");
    require(t_single > 0 && t_double > 0, "DecoherenceModel: durations must be positive");
  }

  /// Kraus operators for an idle of duration t: off-diagonals decay by exp(-t/T2).
  std::vector<Mat2> kraus(double t) const {
    validate();
    const double gamma = 1.0 - std::exp(-t / t1);
    const double f = std::min(1.0, std::exp(-t / t2 + t / (2 * t1)));
    Mat2 k0, k1;
    k0 << 1, 0, 0, std::sqrt(1 - gamma);
    k1 << 0, std::sqrt(gamma), 0, 0;
    const double keep = std::sqrt((1 + f) / 2), flip = std::sqrt((1 - f) / 2);
    const Mat2 z = pauli_matrix(Pauli::Z);
    std::vector<Mat2> out{keep * k0, keep * k1};
    if (flip > 0) {
      out.push_back(flip * z * k0);
      out.push_back(flip * z * k1);
    }
    return out;
  }
};

struct OverrotationNoise {
  OverrotationModel rotation;
  std::optional<DecoherenceModel> decoherence;
};

/// Mediated-coupling chain S-E-S-...-E-S with H_I = sum_k J_k (X_k Y_k+1 + X_k+1 Y_k).
struct LatticeModel {
  int n_sys = 4;
  double j_mean = 0.0;
  double j_variance = 1e-3;                        // J_k ~ N(mean, variance)
  std::vector<double> couplings;                   // fixed J_k when nonempty
  double hard_scale = 0.1;                         // H_hard = hard_scale * CNOT
  double hard_time = 5.0 * std::numbers::pi;
  double easy_time = std::numbers::pi;

  int n_env() const { return n_sys - 1; }
  int chain_length() const { return 2 * n_sys - 1; }
  int edges() const { return chain_length() - 1; }
  static int system_site(int q) { return 2 * q; }

  void validate() const {
    require(n_sys >= 1, "LatticeModel: need at least one system qubit");
    if (chain_length() > kMaxDenseQubits)
      throw ResourceError("LatticeModel: " + std::to_string(chain_length()) +
                          " chain qubits exceeds the cap of " + std::to_string(kMaxDenseQubits));
    require(j_variance >= 0, "LatticeModel: negative coupling variance");
    require(couplings.empty() || static_cast<int>(couplings.size()) == edges(),
            "LatticeModel: need one coupling per chain edge");
  }

  template <class URBG>
  std::vector<double> sample_couplings(URBG& rng) const {
    if (!couplings.empty()) return couplings;
    std::vector<double> j(static_cast<std::size_t>(edges()), j_mean);
    if (j_variance > 0) {
      std::normal_distribution<double> g(j_mean, std::sqrt(j_variance));
      for (auto& x : j) x = g(rng);
    }
    return j;
  }
};

using NoiseModel = std::variant<OverrotationNoise, LatticeModel>;

struct SimResult {
  VectorC final_state;  // state vector, or vectorized density matrix when is_density
  bool is_density = false;
  Distribution distribution;
  double error_rate = 0.0;
};

/// r = 1 - <psi|rho|psi>.
inline double error_rate(const VectorC& ideal, const MatrixC& rho) {
  if (rho.rows() != ideal.size() || rho.cols() != ideal.size())
    throw std::invalid_argument("error_rate: dimension mismatch");
  return 1.0 - (ideal.adjoint() * rho * ideal)(0, 0).real();
}

inline double error_rate(const VectorC& ideal, const VectorC& noisy_state) {
  if (noisy_state.size() != ideal.size()) throw std::invalid_argument("error_rate: dimension mismatch");
  return 1.0 - std::norm(ideal.dot(noisy_state));
}

namespace detail {

inline Distribution measured_distribution(const std::vector<double>& full, int n,
                                          const std::vector<int>& measured) {
  return Distribution(static_cast<int>(measured.size()),
                      kernels::marginal_probabilities(full, n, measured));
}

struct PoweredCycle {
  bool easy = true;
  std::vector<Mat2> singles;
  std::vector<Cnot> pairs;
};

inline std::vector<PoweredCycle> powered_cycles(const Circuit& c, const OverrotationModel& m) {
  std::vector<PoweredCycle> out;
  for (const auto& cy : c.cycles) {
    PoweredCycle p;
    if (const auto* e = std::get_if<EasyCycle>(&cy)) {
      for (const auto& g : e->gates) p.singles.push_back(overrotate(g, m.eps_easy));
    } else {
      p.easy = false;
      p.pairs = std::get<HardCycle>(cy).gates;
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace detail

/// Runs a circuit under overrotation and optional per-cycle decoherence. When
/// `frame` is given it is applied noiselessly at the end (virtual frame change),
/// which is how a compiled member is compared with its bare circuit.
inline SimResult run_overrotation(const Circuit& c, const OverrotationModel& m,
                                  const std::optional<DecoherenceModel>& dec,
                                  const std::optional<PhasedPauli>& frame = std::nullopt) {
  validate(c);
  const int n = c.n;
  if (dec && n > kMaxDensityQubits)
    throw ResourceError("run_overrotation: density-matrix simulation limited to " +
                        std::to_string(kMaxDensityQubits) + " qubits");
  if (n > kMaxDenseQubits) throw ResourceError("run_overrotation: too many qubits");
  const auto cycles = detail::powered_cycles(c, m);
  const Mat4 cx = cnot_overrotated(m.eps_hard);
  VectorC ideal = ideal_state(c);
  if (frame) kernels::apply_pauli(ideal, *frame);

  SimResult res;
  if (!dec) {
    VectorC psi = VectorC::Zero(Eigen::Index{1} << n);
    psi[0] = 1;
    for (const auto& p : cycles) {
      if (p.easy)
        for (int q = 0; q < n; ++q) kernels::apply_1q(psi, n, q, p.singles[q]);
      else
        for (const auto& g : p.pairs) kernels::apply_2q(psi, n, g.control, g.target, cx);
    }
    if (frame) kernels::apply_pauli(psi, *frame);
    res.distribution = detail::measured_distribution(kernels::probabilities(psi), n, c.measured_qubits);
    res.error_rate = error_rate(ideal, psi);
    res.final_state = std::move(psi);
    return res;
  }

  const Mat4 ch_single = kernels::kraus_superop(dec->kraus(dec->t_single));
  const Mat4 ch_double = kernels::kraus_superop(dec->kraus(dec->t_double));
  const Eigen::Index dim = Eigen::Index{1} << n;
  VectorC rho = VectorC::Zero(dim * dim);
  rho[0] = 1;
  for (const auto& p : cycles) {
    if (p.easy)
      for (int q = 0; q < n; ++q) kernels::dm_apply_1q(rho, n, q, p.singles[q]);
    else
      for (const auto& g : p.pairs) kernels::dm_apply_2q(rho, n, g.control, g.target, cx);
    const Mat4& ch = p.easy ? ch_single : ch_double;
    for (int q = 0; q < n; ++q) kernels::dm_apply_channel_1q(rho, n, q, ch);
  }
  if (frame) {
    // F rho F^dagger: F on the row half, conj(F) = (-1)^{#Y} F on the column half.
    PhasedPauli rows(PauliString(2 * n)), cols(PauliString(2 * n));
    int ys = 0;
    for (int q = 0; q < n; ++q) {
      rows.pauli[q] = frame->pauli[q];
      cols.pauli[n + q] = frame->pauli[q];
      ys += frame->pauli[q] == Pauli::Y;
    }
    kernels::apply_pauli(rho, rows);
    kernels::apply_pauli(rho, cols);
    if (ys % 2) rho = -rho;
  }
  res.is_density = true;
  res.distribution = detail::measured_distribution(kernels::dm_probabilities(rho, n), n, c.measured_qubits);
  res.error_rate = 1.0 - kernels::dm_overlap(rho, ideal);
  res.final_state = std::move(rho);
  return res;
}

/// Monte-Carlo unraveling of the same model: one Kraus branch per qubit and
/// cycle, sampled with the Born rule, then one measurement per trajectory.
template <class URBG>
Histogram sample_trajectories(const Circuit& c, const OverrotationModel& m,
                              const DecoherenceModel& dec, int shots, URBG& rng) {
  validate(c);
  require(shots >= 1, "sample_trajectories: shots must be >= 1");
  const int n = c.n;
  const auto cycles = detail::powered_cycles(c, m);
  const Mat4 cx = cnot_overrotated(m.eps_hard);
  const auto k_single = dec.kraus(dec.t_single);
  const auto k_double = dec.kraus(dec.t_double);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  Histogram counts;
  const int bits = static_cast<int>(c.measured_qubits.size());
  for (int s = 0; s < shots; ++s) {
    VectorC psi = VectorC::Zero(Eigen::Index{1} << n);
    psi[0] = 1;
    for (const auto& p : cycles) {
      if (p.easy)
        for (int q = 0; q < n; ++q) kernels::apply_1q(psi, n, q, p.singles[q]);
      else
        for (const auto& g : p.pairs) kernels::apply_2q(psi, n, g.control, g.target, cx);
      const auto& ks = p.easy ? k_single : k_double;
      for (int q = 0; q < n; ++q) {
        double r = u01(rng);
        VectorC branch;
        for (std::size_t i = 0; i < ks.size(); ++i) {
          branch = psi;
          kernels::apply_1q(branch, n, q, ks[i]);
          const double w = branch.squaredNorm();
          if (r < w || i + 1 == ks.size()) break;
          r -= w;
        }
        psi = branch / branch.norm();
      }
    }
    auto probs = kernels::probabilities(psi);
    std::discrete_distribution<std::size_t> pick(probs.begin(), probs.end());
    const std::size_t outcome = pick(rng);
    std::size_t o = 0;
    for (int q : c.measured_qubits) o = (o << 1) | ((outcome & kernels::bit_of(n, q)) ? 1u : 0u);
    counts[Distribution::key_of(o, bits)] += 1;
  }
  return counts;
}

template <class URBG>
Histogram sample_counts(const Distribution& d, int shots, URBG& rng) {
  require(shots >= 1, "sample_counts: shots must be >= 1");
  std::discrete_distribution<std::size_t> pick(d.probs().begin(), d.probs().end());
  Histogram h;
  for (int s = 0; s < shots; ++s) h[Distribution::key_of(pick(rng), d.bits())] += 1;
  return h;
}

// ---------------------------------------------------------------------------
// Lattice (non-Markovian) model

struct PauliTerm {
  double coeff = 0.0;
  PhasedPauli op;
};

using PauliSum = std::vector<PauliTerm>;

namespace detail {

struct CompiledTerm {
  double coeff;
  kernels::PauliMasks masks;
};

inline PauliString single_site(int length, int site, Pauli p) {
  PauliString s(length);
  s[site] = p;
  return s;
}

inline PauliString two_site(int length, int a, Pauli pa, int b, Pauli pb) {
  PauliString s(length);
  s[a] = pa;
  s[b] = pb;
  return s;
}

}  // namespace detail

/// exp(-i t H) psi by scaled Taylor steps (||H tau|| <= 1/2 per step), accurate
/// to double precision.
inline void evolve(VectorC& psi, const PauliSum& h, double t) {
  std::vector<detail::CompiledTerm> terms;
  double norm = 0;
  for (const auto& term : h) {
    if (term.coeff == 0.0) continue;
    terms.push_back({term.coeff, kernels::pauli_masks(term.op)});
    norm += std::abs(term.coeff);
  }
  if (terms.empty() || t == 0.0) return;
  const int steps = std::max(1, static_cast<int>(std::ceil(2.0 * norm * std::abs(t))));
  const double tau = t / steps;
  VectorC term(psi.size()), next(psi.size());
  for (int s = 0; s < steps; ++s) {
    term = psi;
    for (int k = 1; k < 60; ++k) {
      next.setZero();
      for (const auto& ct : terms) kernels::add_pauli_action(next, term, ct.masks, ct.coeff);
      term = next * (Complex(0.0, -tau) / static_cast<double>(k));
      psi += term;
      if (term.norm() < 1e-17) break;
    }
  }
}

inline PauliSum interaction_hamiltonian(const LatticeModel& m, const std::vector<double>& j) {
  const int len = m.chain_length();
  PauliSum h;
  for (int k = 0; k + 1 < len; ++k) {
    h.push_back({j[k], PhasedPauli(detail::two_site(len, k, Pauli::X, k + 1, Pauli::Y))});
    h.push_back({j[k], PhasedPauli(detail::two_site(len, k + 1, Pauli::X, k, Pauli::Y))});
  }
  return h;
}

/// Gate Hamiltonian for one cycle: easy gates exp(-i theta/2 n.sigma) become
/// theta/(2 t_easy) n.sigma; each CNOT becomes hard_scale * CNOT written as
/// (I + Z_c + X_t - Z_c X_t) / 2.
inline PauliSum cycle_hamiltonian(const LatticeModel& m, const Cycle& cycle) {
  const int len = m.chain_length();
  PauliSum h;
  if (const auto* e = std::get_if<EasyCycle>(&cycle)) {
    for (int q = 0; q < e->n(); ++q) {
      const AxisAngle r = axis_angle(e->gates[q]);
      if (r.theta == 0.0) continue;
      const double w = r.theta / (2.0 * m.easy_time);
      const int site = LatticeModel::system_site(q);
      const Pauli ps[3] = {Pauli::X, Pauli::Y, Pauli::Z};
      for (int a = 0; a < 3; ++a)
        if (r.axis[a] != 0.0) h.push_back({w * r.axis[a], PhasedPauli(detail::single_site(len, site, ps[a]))});
    }
  } else {
    const double w = m.hard_scale / 2.0;
    for (const auto& g : std::get<HardCycle>(cycle).gates) {
      const int c = LatticeModel::system_site(g.control), t = LatticeModel::system_site(g.target);
      h.push_back({w, PhasedPauli(PauliString(len))});
      h.push_back({w, PhasedPauli(detail::single_site(len, c, Pauli::Z))});
      h.push_back({w, PhasedPauli(detail::single_site(len, t, Pauli::X))});
      h.push_back({-w, PhasedPauli(detail::two_site(len, c, Pauli::Z, t, Pauli::X))});
    }
  }
  return h;
}

namespace detail {

// Joint chain index <-> (system index, environment index).
struct ChainLayout {
  std::vector<std::size_t> sys_of;
  std::vector<std::size_t> env_of;
  std::size_t env_dim = 1;
};

inline ChainLayout chain_layout(const LatticeModel& m) {
  const int len = m.chain_length();
  const std::size_t dim = std::size_t{1} << len;
  ChainLayout l;
  l.sys_of.resize(dim);
  l.env_of.resize(dim);
  l.env_dim = std::size_t{1} << m.n_env();
  for (std::size_t i = 0; i < dim; ++i) {
    std::size_t s = 0, e = 0;
    for (int p = 0; p < len; ++p) {
      const bool bit = (i >> (len - 1 - p)) & 1u;
      if (p % 2 == 0)
        s = (s << 1) | bit;
      else
        e = (e << 1) | bit;
    }
    l.sys_of[i] = s;
    l.env_of[i] = e;
  }
  return l;
}

// <psi| Tr_E(|Psi><Psi|) |psi>.
inline double system_overlap(const VectorC& joint, const VectorC& sys_ideal, const ChainLayout& l) {
  std::vector<Complex> amp(l.env_dim, Complex(0));
  for (std::size_t i = 0; i < l.sys_of.size(); ++i)
    amp[l.env_of[i]] += std::conj(sys_ideal[static_cast<Eigen::Index>(l.sys_of[i])]) * joint[static_cast<Eigen::Index>(i)];
  double s = 0;
  for (const auto& a : amp) s += std::norm(a);
  return s;
}

inline PhasedPauli embed_system(const PhasedPauli& p, const LatticeModel& m) {
  PhasedPauli out(p.phase, PauliString(m.chain_length()));
  for (int q = 0; q < p.n(); ++q) out.pauli[LatticeModel::system_site(q)] = p.pauli[q];
  return out;
}

}  // namespace detail

struct LatticeRun {
  std::vector<double> error_rates;  // after easy cycle k, k = 0..M
  VectorC final_joint_state;
  VectorC final_system_ideal;
};

/// Simulates `bare` (or its compilation with the given twirls) on the chain
/// with fixed couplings, recording the error rate after every easy cycle. For
/// compiled runs the frame T_k is undone virtually at each checkpoint, so entry
/// k is the error rate of a valid depth-k compilation.
inline LatticeRun lattice_error_trajectory(const Circuit& bare, const LatticeModel& m,
                                           const std::vector<double>& couplings,
                                           const std::vector<PauliString>* twirls = nullptr) {
  validate(bare);
  m.validate();
  require(bare.n == m.n_sys, "lattice: circuit qubit count must equal n_sys");
  require(static_cast<int>(couplings.size()) == m.edges(), "lattice: wrong number of couplings");
  const Circuit run = twirls ? compile_with_twirls(bare, *twirls).circuit : bare;
  const PauliSum h_int = interaction_hamiltonian(m, couplings);
  const auto layout = detail::chain_layout(m);

  LatticeRun out;
  VectorC psi = VectorC::Zero(Eigen::Index{1} << m.chain_length());
  psi[0] = 1;
  VectorC ideal = VectorC::Zero(Eigen::Index{1} << m.n_sys);
  ideal[0] = 1;
  for (std::size_t i = 0; i < run.cycles.size(); ++i) {
    const bool easy = i % 2 == 0;
    PauliSum h = cycle_hamiltonian(m, run.cycles[i]);
    h.insert(h.end(), h_int.begin(), h_int.end());
    evolve(psi, h, easy ? m.easy_time : m.hard_time);
    apply_cycle(ideal, m.n_sys, bare.cycles[i]);
    if (!easy) continue;
    if (twirls) {
      VectorC framed = psi;
      kernels::apply_pauli(framed, detail::embed_system(PhasedPauli((*twirls)[i / 2]).dagger(), m));
      out.error_rates.push_back(1.0 - detail::system_overlap(framed, ideal, layout));
      if (i + 1 == run.cycles.size()) psi = framed;
    } else {
      out.error_rates.push_back(1.0 - detail::system_overlap(psi, ideal, layout));
    }
  }
  out.final_joint_state = std::move(psi);
  out.final_system_ideal = std::move(ideal);
  return out;
}

namespace detail {

inline Distribution lattice_distribution(const VectorC& joint, const LatticeModel& m,
                                         const std::vector<int>& measured) {
  const auto layout = chain_layout(m);
  std::vector<double> sys(std::size_t{1} << m.n_sys, 0.0);
  for (std::size_t i = 0; i < layout.sys_of.size(); ++i) sys[layout.sys_of[i]] += std::norm(joint[static_cast<Eigen::Index>(i)]);
  return measured_distribution(sys, m.n_sys, measured);
}

}  // namespace detail

/// One realization: couplings drawn from the model, then the circuit is run.
template <class URBG>
SimResult run_lattice(const Circuit& c, const LatticeModel& m, URBG& rng) {
  m.validate();
  const auto j = m.sample_couplings(rng);
  LatticeRun run = lattice_error_trajectory(c, m, j);
  SimResult res;
  res.distribution = detail::lattice_distribution(run.final_joint_state, m, c.measured_qubits);
  res.error_rate = run.error_rates.back();
  res.final_state = std::move(run.final_joint_state);
  return res;
}

struct CompiledRun {
  std::vector<SimResult> members;
  Distribution average;        // uniform mixture of frame-corrected member distributions
  double mean_error_rate = 0.0;
};

/// Executes every member, corrects its frame, and averages. For the lattice
/// model one coupling realization is drawn and shared by all members.
template <class URBG>
CompiledRun run_compiled(const RandomizationEnsemble& ensemble, const NoiseModel& model, URBG& rng) {
  require(!ensemble.members.empty(), "run_compiled: empty ensemble");
  CompiledRun out;
  std::vector<double> couplings;
  if (const auto* lm = std::get_if<LatticeModel>(&model)) {
    lm->validate();
    couplings = lm->sample_couplings(rng);
  }
  for (const auto& member : ensemble.members) {
    SimResult r;
    if (const auto* ov = std::get_if<OverrotationNoise>(&model)) {
      r = run_overrotation(member.circuit, ov->rotation, ov->decoherence, member.final_frame);
    } else {
      const auto& lm = std::get<LatticeModel>(model);
      LatticeRun run = lattice_error_trajectory(ensemble.bare, lm, couplings, &member.twirls);
      r.distribution = detail::lattice_distribution(run.final_joint_state, lm, ensemble.bare.measured_qubits);
      r.error_rate = run.error_rates.back();
      r.final_state = std::move(run.final_joint_state);
    }
    out.members.push_back(std::move(r));
  }
  const int bits = out.members.front().distribution.bits();
  out.average = Distribution::zeros(bits);
  for (const auto& r : out.members) {
    for (std::size_t o = 0; o < r.distribution.size(); ++o) out.average[o] += r.distribution[o];
    out.mean_error_rate += r.error_rate;
  }
  const double k = static_cast<double>(out.members.size());
  for (std::size_t o = 0; o < out.average.size(); ++o) out.average[o] /= k;
  out.mean_error_rate /= k;
  return out;
}

/// Upper bound on ||H_I||: sum_k 2 |J_k|.
inline double coupling_bound(const std::vector<double>& j) {
  double s = 0;
  for (double x : j) s += 2 * std::abs(x);
  return s;
}

struct RddOptions {
  double dt = std::numbers::pi;  // pulse spacing
  int draws = 100;
};

/// Error rate of one random-decoupling run with fixed couplings: pulses T_1,
/// T_1 T_2, ..., T_M instantaneous on the system, free evolution under H_I.
template <class URBG>
double rdd_run(const LatticeModel& m, const std::vector<double>& couplings, int rounds, double dt, URBG& rng) {
  const PauliSum h = interaction_hamiltonian(m, couplings);
  const auto layout = detail::chain_layout(m);
  VectorC psi = VectorC::Zero(Eigen::Index{1} << m.chain_length());
  psi[0] = 1;
  PauliString prev = PauliString::identity(m.n_sys);
  for (int k = 0; k < rounds; ++k) {
    const PauliString t = sample_uniform(m.n_sys, rng);
    kernels::apply_pauli(psi, detail::embed_system(multiply(PhasedPauli(t), PhasedPauli(prev)), m));
    evolve(psi, h, dt);
    prev = t;
  }
  kernels::apply_pauli(psi, detail::embed_system(PhasedPauli(prev), m));
  VectorC ideal = VectorC::Zero(Eigen::Index{1} << m.n_sys);
  ideal[0] = 1;
  return 1.0 - detail::system_overlap(psi, ideal, layout);
}

/// Mean RDD error rate over fresh coupling and pulse draws on the identity
/// circuit.
template <class URBG>
double rdd_baseline(const LatticeModel& m, int rounds, URBG& rng, const RddOptions& opt = {}) {
  m.validate();
  require(rounds >= 1 && opt.draws >= 1, "rdd_baseline: rounds and draws must be >= 1");
  double acc = 0;
  for (int d = 0; d < opt.draws; ++d) {
    const auto j = m.sample_couplings(rng);
    acc += rdd_run(m, j, rounds, opt.dt, rng);
  }
  return acc / opt.draws;
}

}  // namespace twirlc
