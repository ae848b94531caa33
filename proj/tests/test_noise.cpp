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

#include <gtest/gtest.h>

#include <numbers>

#include "oracle.hpp"
#include "twirlc/channels.hpp"
#include "twirlc/metrics.hpp"
#include "twirlc/noise.hpp"

using namespace twirlc;

namespace {

constexpr double kPi = std::numbers::pi;

Circuit single(const Mat2& g) {
  EasyCycle e;
  e.gates = {g};
  return Circuit(1, {e});
}

oracle::M dense_hamiltonian(const PauliSum& h, int n) {
  oracle::M m = oracle::M::Zero(1L << n, 1L << n);
  for (const auto& t : h) m += t.coeff * t.op.phase.value() * oracle::pauli_string(t.op.pauli.str());
  return m;
}

Circuit permuted(const Circuit& c, const std::vector<int>& perm) {
  Circuit out = c;
  for (std::size_t i = 0; i < c.cycles.size(); ++i) {
    if (const auto* e = std::get_if<EasyCycle>(&c.cycles[i])) {
      EasyCycle p = *e;
      for (int q = 0; q < c.n; ++q) p.gates[perm[q]] = e->gates[q];
      out.cycles[i] = p;
    } else {
      HardCycle h = std::get<HardCycle>(c.cycles[i]);
      for (auto& g : h.gates) g = {perm[g.control], perm[g.target]};
      out.cycles[i] = h;
    }
  }
  return out;
}

}  // namespace

TEST(Overrotation, AxisAngleReconstructs) {
  Rng rng(51);
  for (int t = 0; t < 100; ++t) {
    const Mat2 u = gates::haar_su2(rng) * std::polar(1.0, 0.1 * t);
    const AxisAngle r = axis_angle(u);
    EXPECT_GE(r.theta, 0);
    EXPECT_LE(r.theta, kPi + 1e-12);
    EXPECT_LT((r.phase * rotation(r.theta, r.axis) - u).norm(), 1e-12);
    EXPECT_LT((overrotate(u, 0.0) - u).norm(), 1e-12);
  }
}

TEST(Overrotation, PowerMatchesEigenOracle) {
  // Scaling the eigenphase gap (wrapped into (-pi, pi]) by 1 + eps, up to a global phase.
  Rng rng(52);
  for (int t = 0; t < 40; ++t) {
    const Mat2 u = gates::haar_su2(rng) * std::polar(1.0, 0.37 * t);
    Eigen::ComplexEigenSolver<oracle::M> es{oracle::M(u)};
    const auto ev = es.eigenvalues();
    const double gap = std::arg(ev[0] / ev[1]);
    oracle::M d = oracle::M::Zero(2, 2);
    d(0, 0) = std::polar(1.0, 0.65 * gap);
    d(1, 1) = std::polar(1.0, -0.65 * gap);
    const oracle::M expect = es.eigenvectors() * d * es.eigenvectors().inverse();
    const oracle::M got = overrotate(u, 0.3);
    EXPECT_NEAR(std::abs((expect.adjoint() * got).trace()) / 2, 1.0, 1e-12);
    EXPECT_NEAR(axis_angle(u).theta, std::abs(gap), 1e-10);
  }
}

TEST(Overrotation, CnotPower) {
  EXPECT_LT((cnot_overrotated(0.0) - gates::cnot()).norm(), 1e-15);
  const double eps = 0.05;
  // CNOT is Hermitian with eigenvalues +-1; the -1 eigenspace picks up exp(i pi (1 + eps)).
  Eigen::SelfAdjointEigenSolver<oracle::M> es{oracle::M(gates::cnot())};
  oracle::M d = oracle::M::Zero(4, 4);
  for (int k = 0; k < 4; ++k) d(k, k) = es.eigenvalues()[k] < 0 ? std::polar(1.0, kPi * (1 + eps)) : oracle::C(1);
  const oracle::M expect = es.eigenvectors() * d * es.eigenvectors().adjoint();
  EXPECT_LT((oracle::M(cnot_overrotated(eps)) - expect).norm(), 1e-14);
  EXPECT_TRUE(is_unitary_matrix(cnot_overrotated(eps), 1e-14));
}

TEST(Overrotation, XGateExample) {
  const SimResult r = run_overrotation(single(gates::X()), {0.1, 0.0}, std::nullopt);
  EXPECT_NEAR(r.error_rate, std::pow(std::sin(0.05 * kPi), 2), 1e-14);
  oracle::V expect = (oracle::C(0, -0.05 * kPi) * oracle::pauli('X')).exp() * oracle::pauli('X') * oracle::V::Unit(2, 0);
  EXPECT_NEAR(std::abs(expect.dot(r.final_state)), 1.0, 1e-14);
}

TEST(Overrotation, NoiselessIsIdeal) {
  Rng rng(53);
  const Circuit c = gen_uniform_random(4, 4, rng);
  const SimResult r = run_overrotation(c, {0, 0}, std::nullopt);
  EXPECT_LT(r.error_rate, 1e-12);
  const auto ideal = oracle::probabilities(ideal_unitary(c).col(0));
  EXPECT_LT(oracle::tvd(r.distribution.probs(), ideal), 1e-12);
  EXPECT_NEAR(r.final_state.norm(), 1.0, 1e-12);
}

TEST(ErrorRate, Examples) {
  Rng rng(54);
  VectorC psi = oracle::random_unitary(4, rng).col(0);
  EXPECT_NEAR(error_rate(psi, MatrixC(psi * psi.adjoint())), 0.0, 1e-14);
  VectorC orth = psi;
  orth -= psi.dot(orth) * psi;
  VectorC other = oracle::random_unitary(4, rng).col(1);
  other -= psi.dot(other) * psi;
  EXPECT_NEAR(error_rate(psi, VectorC(other.normalized())), 1.0, 1e-14);
  VectorC q = oracle::random_unitary(2, rng).col(0);
  EXPECT_NEAR(error_rate(q, MatrixC(MatrixC::Identity(2, 2) / 2.0)), 0.5, 1e-15);
  EXPECT_THROW(error_rate(q, psi), std::invalid_argument);
}

TEST(Decoherence, KrausMatchesT1T2) {
  DecoherenceModel d;
  d.t1 = 40e-6;
  d.t2 = 30e-6;
  const double t = 5e-6;
  const auto ks = d.kraus(t);
  std::vector<MatrixC> km(ks.begin(), ks.end());
  EXPECT_TRUE(kraus_is_trace_preserving(km, 1e-14));
  oracle::M plus = oracle::M::Constant(2, 2, 0.5), one = oracle::M::Zero(2, 2);
  one(1, 1) = 1;
  oracle::M out_plus = oracle::M::Zero(2, 2), out_one = oracle::M::Zero(2, 2);
  for (const auto& k : ks) {
    out_plus += k * plus * k.adjoint();
    out_one += k * one * k.adjoint();
  }
  EXPECT_NEAR(std::abs(out_plus(0, 1)), 0.5 * std::exp(-t / d.t2), 1e-14);
  EXPECT_NEAR(out_one(1, 1).real(), std::exp(-t / d.t1), 1e-14);
  d.t2 = 100e-6;
  EXPECT_THROW(d.validate(), std::invalid_argument);
}

TEST(Decoherence, DensityMatchesIdealWhenNegligible) {
  Rng rng(55);
  const Circuit c = gen_uniform_random(3, 3, rng);
  DecoherenceModel d;
  d.t1 = d.t2 = 1e9;
  const SimResult a = run_overrotation(c, {0.02, 0.04}, d);
  const SimResult b = run_overrotation(c, {0.02, 0.04}, std::nullopt);
  EXPECT_TRUE(a.is_density);
  EXPECT_LT(oracle::tvd(a.distribution.probs(), b.distribution.probs()), 1e-9);
  EXPECT_NEAR(a.error_rate, b.error_rate, 1e-9);
}

TEST(Decoherence, DensityMatchesDenseKrausOracle) {
  Rng rng(56);
  const Circuit c = gen_uniform_random(2, 2, rng);
  DecoherenceModel d;
  d.t1 = 2e-6;
  d.t2 = 3e-6;
  const OverrotationModel m{0.03, 0.07};
  const SimResult r = run_overrotation(c, m, d);
  oracle::M rho = oracle::M::Zero(4, 4);
  rho(0, 0) = 1;
  auto channel = [&](double t) {
    for (int q = 0; q < 2; ++q) {
      oracle::M acc = oracle::M::Zero(4, 4);
      for (const auto& k : d.kraus(t)) {
        const oracle::M kk = oracle::embed1(2, q, oracle::M(k));
        acc += kk * rho * kk.adjoint();
      }
      rho = acc;
    }
  };
  for (const auto& cy : c.cycles) {
    if (const auto* e = std::get_if<EasyCycle>(&cy)) {
      for (int q = 0; q < 2; ++q) {
        const oracle::M u = oracle::embed1(2, q, oracle::M(overrotate(e->gates[q], m.eps_easy)));
        rho = u * rho * u.adjoint();
      }
      channel(d.t_single);
    } else {
      for (const auto& g : std::get<HardCycle>(cy).gates) {
        // CNOT^(1+eps) = exp(i pi (1+eps) |1><1| (x) |-><-|) on (control, target)
        oracle::M proj = oracle::M::Zero(4, 4);
        oracle::V v = oracle::V::Zero(4);
        const long c1 = 1L << (1 - g.control), t1 = 1L << (1 - g.target);
        v[c1] = std::sqrt(0.5);
        v[c1 | t1] = -std::sqrt(0.5);
        proj = v * v.adjoint();
        const oracle::M u = oracle::M::Identity(4, 4) + (std::polar(1.0, kPi * (1 + m.eps_hard)) - 1.0) * proj;
        rho = u * rho * u.adjoint();
      }
      channel(d.t_double);
    }
  }
  std::vector<double> expect(4);
  for (int i = 0; i < 4; ++i) expect[i] = rho(i, i).real();
  EXPECT_LT(oracle::tvd(r.distribution.probs(), expect), 1e-12);
}

TEST(Decoherence, TrajectoriesMatchDensityMatrix) {
  Rng rng(57);
  for (int n = 1; n <= 3; ++n) {
    Circuit c = n == 1 ? Circuit(1, {EasyCycle::uniform(1, gates::H()), HardCycle{}, EasyCycle::uniform(1, gates::rx(0.4))})
                       : gen_uniform_random(n, 2, rng);
    DecoherenceModel d;
    d.t1 = 0.5e-6;
    d.t2 = 0.6e-6;
    const OverrotationModel m{0.05, 0.05};
    const Distribution exact = run_overrotation(c, m, d).distribution;
    const int shots = 20000;
    const Distribution emp = Distribution::from_counts(sample_trajectories(c, m, d, shots, rng), n);
    for (std::size_t o = 0; o < exact.size(); ++o) {
      const double sigma = std::sqrt(exact[o] * (1 - exact[o]) / shots);
      EXPECT_LE(std::abs(emp[o] - exact[o]), 3 * sigma + 1e-12) << "n=" << n << " outcome " << o;
    }
  }
}

TEST(Decoherence, ResourceCap) {
  Rng rng(58);
  const Circuit c = gen_uniform_random(kMaxDensityQubits + 1, 1, rng);
  EXPECT_THROW(run_overrotation(c, {0, 0}, DecoherenceModel{}), ResourceError);
}

TEST(Compiled, NoiselessAverageIsIdeal) {
  Rng rng(59);
  const Circuit c = gen_uniform_random(3, 3, rng);
  const auto ens = compile_ensemble(c, 5, 1);
  const CompiledRun run = run_compiled(ens, OverrotationNoise{}, rng);
  const auto ideal = oracle::probabilities(ideal_unitary(c).col(0));
  EXPECT_LT(oracle::tvd(run.average.probs(), ideal), 1e-12);
  EXPECT_LT(run.mean_error_rate, 1e-12);
}

TEST(Compiled, ExhaustiveTwirlReproducesChannelTwirl) {
  // Two qubits, E0 - CNOT - E1 with only the CNOT overrotated. Averaging over
  // all 16 twirls T0 gives E1 . twirl(CNOT^eps) . CNOT . E0.
  Rng rng(60);
  const double eps = 0.2;
  Circuit c = gen_uniform_random(2, 1, rng);
  std::get<HardCycle>(c.cycles[1]).gates = {{0, 1}};
  RandomizationEnsemble ens;
  ens.bare = c;
  for (std::size_t k = 0; k < 16; ++k)
    ens.members.push_back(compile_with_twirls(c, {PauliString::from_index(k, 2), PauliString::identity(2)}));
  const CompiledRun run = run_compiled(ens, OverrotationNoise{{0.0, eps}, std::nullopt}, rng);

  const MatrixC lambda = cnot_overrotated(eps) * gates::cnot().adjoint();
  const SuperOp tw = twirl_average(ptm_from_unitary(lambda));
  const oracle::M e0 = oracle::kron(oracle::M(c.easy(0).gates[0]), oracle::M(c.easy(0).gates[1]));
  const oracle::M e1 = oracle::kron(oracle::M(c.easy(1).gates[0]), oracle::M(c.easy(1).gates[1]));
  const oracle::M pre = oracle::cnot(2, 0, 1) * e0;
  oracle::M rho = oracle::M::Zero(4, 4);
  rho(0, 0) = 1;
  rho = pre * rho * pre.adjoint();
  rho = tw.apply(rho);
  rho = e1 * rho * e1.adjoint();
  std::vector<double> expect(4);
  for (int i = 0; i < 4; ++i) expect[i] = rho(i, i).real();
  EXPECT_LT(oracle::tvd(run.average.probs(), expect), 1e-10);
}

TEST(Compiled, PermutationCovariance) {
  Rng rng(61);
  const Circuit c = gen_uniform_random(3, 3, rng);
  const std::vector<int> perm{2, 0, 1};
  const Circuit pc = permuted(c, perm);
  RandomizationEnsemble a, b;
  a.bare = c;
  b.bare = pc;
  for (int k = 0; k < 6; ++k) {
    const auto tw = sample_twirls(3, 3, rng);
    std::vector<PauliString> ptw;
    for (const auto& t : tw) {
      PauliString p(3);
      for (int q = 0; q < 3; ++q) p[perm[q]] = t[q];
      ptw.push_back(p);
    }
    a.members.push_back(compile_with_twirls(c, tw));
    b.members.push_back(compile_with_twirls(pc, ptw));
  }
  DecoherenceModel d;
  d.t1 = 1e-6;
  d.t2 = 1.5e-6;
  const OverrotationNoise noise{{0.05, 0.1}, d};
  const Distribution da = run_compiled(a, noise, rng).average, db = run_compiled(b, noise, rng).average;
  for (std::size_t o = 0; o < 8; ++o) {
    std::size_t po = 0;
    for (int q = 0; q < 3; ++q)
      if (o >> (2 - q) & 1u) po |= std::size_t{1} << (2 - perm[q]);
    EXPECT_NEAR(da[o], db[po], 1e-12);
  }
}

TEST(Lattice, EvolveMatchesDenseExponential) {
  Rng rng(62);
  std::normal_distribution<double> g;
  PauliSum h;
  for (int k = 0; k < 8; ++k) h.push_back({g(rng), PhasedPauli(sample_uniform(3, rng))});
  VectorC psi = oracle::random_unitary(8, rng).col(0);
  const oracle::V expect = (oracle::C(0, -2.5) * dense_hamiltonian(h, 3)).exp() * psi;
  evolve(psi, h, 2.5);
  EXPECT_LT((psi - expect).norm(), 1e-12);
  EXPECT_NEAR(psi.norm(), 1.0, 1e-12);
}

TEST(Lattice, GateHamiltoniansAreExact) {
  LatticeModel m;
  m.n_sys = 2;
  const int len = m.chain_length();
  Rng rng(63);
  const VectorC psi0 = oracle::random_unitary(1L << len, rng).col(0);
  // hard: exp(-i 5 pi 0.1 CNOT) = -i CNOT
  VectorC psi = psi0;
  evolve(psi, cycle_hamiltonian(m, HardCycle{{{1, 0}}}), m.hard_time);
  const oracle::M cx = oracle::cnot(len, 2, 0);
  EXPECT_LT((psi - oracle::C(0, -1) * (cx * psi0)).norm(), 1e-12);
  // easy: reproduces each gate up to a global phase
  EasyCycle e{{gates::haar_su2(rng), gates::H()}};
  psi = psi0;
  evolve(psi, cycle_hamiltonian(m, e), m.easy_time);
  const oracle::V expect = oracle::embed1(len, 0, oracle::M(e.gates[0])) * oracle::embed1(len, 2, oracle::M(e.gates[1])) * psi0;
  EXPECT_NEAR(std::abs(expect.dot(psi)), 1.0, 1e-12);
}

TEST(Lattice, ZeroCouplingIsNoiseless) {
  LatticeModel m;
  m.n_sys = 4;
  Rng rng(64);
  const std::vector<double> j(static_cast<std::size_t>(m.edges()), 0.0);
  for (const Circuit& c : {gen_structured(StructuredKind::A, 4, 8, rng), gen_uniform_random(4, 5, rng)}) {
    const LatticeRun bare = lattice_error_trajectory(c, m, j);
    const auto tw = sample_twirls(4, c.depth(), rng);
    const LatticeRun rc = lattice_error_trajectory(c, m, j, &tw);
    for (double r : bare.error_rates) EXPECT_LT(std::abs(r), 1e-8);
    for (double r : rc.error_rates) EXPECT_LT(std::abs(r), 1e-8);
    EXPECT_NEAR(bare.final_joint_state.norm(), 1.0, 1e-8);
  }
  m.j_variance = 0;
  const SimResult r = run_lattice(gen_structured(StructuredKind::B, 4, 6, rng), m, rng);
  EXPECT_LT(r.error_rate, 1e-8);
}

TEST(Lattice, InteractionIsHermitianChainSum) {
  LatticeModel m;
  m.n_sys = 2;
  const std::vector<double> j{0.3, -0.2};
  const oracle::M h = dense_hamiltonian(interaction_hamiltonian(m, j), 3);
  const oracle::M expect = 0.3 * (oracle::pauli_string("XYI") + oracle::pauli_string("YXI")) -
                           0.2 * (oracle::pauli_string("IXY") + oracle::pauli_string("IYX"));
  EXPECT_LT((h - expect).norm(), 1e-15);
}

TEST(Lattice, PrefixCheckpointMatchesShortCompilation) {
  // Entry k of a compiled trajectory equals a full run of the depth-k prefix.
  LatticeModel m;
  m.n_sys = 2;
  Rng rng(65);
  const Circuit c = gen_structured(StructuredKind::B, 2, 6, rng);
  const std::vector<double> j{0.01, -0.02};
  const auto tw = sample_twirls(2, 6, rng);
  const LatticeRun full = lattice_error_trajectory(c, m, j, &tw);
  for (int k = 0; k <= 6; ++k) {
    Circuit prefix(2, std::vector<Cycle>(c.cycles.begin(), c.cycles.begin() + 2 * k + 1));
    const std::vector<PauliString> ptw(tw.begin(), tw.begin() + k + 1);
    EXPECT_NEAR(lattice_error_trajectory(prefix, m, j, &ptw).error_rates.back(), full.error_rates[k], 1e-12);
  }
}

TEST(Lattice, CircuitScalingAtSixQubits) {
  // n = 6 system + 5 environment qubits, weak coupling: bare circuit A grows
  // quadratically, bare circuit B close to linearly.
  LatticeModel m;
  m.n_sys = 6;
  m.j_variance = 1e-8;
  const std::vector<double> ms{10, 20, 30, 40, 50, 60};
  std::vector<double> ra(ms.size(), 0.0), rb(ms.size(), 0.0);
  const int draws = 8;
  for (int d = 0; d < draws; ++d) {
    Rng rng(derive_seed(66, static_cast<std::uint64_t>(d)));
    const auto j = m.sample_couplings(rng);
    const LatticeRun a = lattice_error_trajectory(gen_structured(StructuredKind::A, 6, 60, rng), m, j);
    const LatticeRun b = lattice_error_trajectory(gen_structured(StructuredKind::B, 6, 60, rng), m, j);
    for (std::size_t i = 0; i < ms.size(); ++i) {
      ra[i] += a.error_rates[static_cast<std::size_t>(ms[i])] / draws;
      rb[i] += b.error_rates[static_cast<std::size_t>(ms[i])] / draws;
    }
  }
  EXPECT_GE(oracle::loglog_slope(ms, ra), 1.7);
  EXPECT_LE(oracle::loglog_slope(ms, rb), 1.3);
}

TEST(Lattice, RcCurvesForAAndBAgree) {
  LatticeModel m;
  m.n_sys = 6;
  m.j_variance = 1e-8;
  double ra = 0, rb = 0;
  const int draws = 30;
  for (int d = 0; d < draws; ++d) {
    Rng rng(derive_seed(67, static_cast<std::uint64_t>(d)));
    const auto j = m.sample_couplings(rng);
    const Circuit a = gen_structured(StructuredKind::A, 6, 100, rng);
    const Circuit b = gen_structured(StructuredKind::B, 6, 100, rng);
    const auto tw = sample_twirls(6, 100, rng);
    ra += lattice_error_trajectory(a, m, j, &tw).error_rates.back() / draws;
    rb += lattice_error_trajectory(b, m, j, &tw).error_rates.back() / draws;
  }
  EXPECT_LT(std::abs(ra - rb) / std::max(ra, rb), 0.10) << ra << " vs " << rb;
}

TEST(Rdd, ZeroCouplingIsExact) {
  LatticeModel m;
  m.n_sys = 3;
  m.j_variance = 0;
  Rng rng(68);
  EXPECT_LT(rdd_baseline(m, 10, rng, {kPi, 5}), 1e-12);
}

TEST(Rdd, TracksSingleRandomizationOnIdentityCircuit) {
  // Identity circuit with empty hard cycles: RC with one randomization applies
  // a fresh Pauli frame once per cycle, as RDD does with dt = one cycle.
  LatticeModel m;
  m.n_sys = 3;
  m.j_variance = 1e-8;
  const int rounds = 20, draws = 300;
  std::vector<Cycle> cycles{EasyCycle::identity(3)};
  for (int k = 0; k < rounds; ++k) {
    cycles.emplace_back(HardCycle{});
    cycles.emplace_back(EasyCycle::identity(3));
  }
  const Circuit id(3, std::move(cycles));
  double rdd = 0, rc = 0;
  for (int d = 0; d < draws; ++d) {
    Rng rng(derive_seed(69, static_cast<std::uint64_t>(d)));
    const auto j = m.sample_couplings(rng);
    const auto tw = sample_twirls(3, rounds, rng);
    rc += lattice_error_trajectory(id, m, j, &tw).error_rates.back() / draws;
    rdd += rdd_run(m, j, rounds, m.easy_time + m.hard_time, rng) / draws;
  }
  EXPECT_LT(std::abs(rdd - rc) / rc, 0.20) << rdd << " vs " << rc;
}
