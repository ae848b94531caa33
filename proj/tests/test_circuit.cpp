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

#include <functional>
#include <map>
#include <set>

#include "oracle.hpp"
#include "twirlc/circuit.hpp"
#include "twirlc/circuit_io.hpp"

using namespace twirlc;

namespace {

oracle::M dense_unitary(const Circuit& c) {
  oracle::M u = oracle::M::Identity(1L << c.n, 1L << c.n);
  for (const auto& cy : c.cycles) {
    if (const auto* e = std::get_if<EasyCycle>(&cy))
      for (int q = 0; q < c.n; ++q) u = oracle::embed1(c.n, q, oracle::M(e->gates[q])) * u;
    else
      for (const auto& g : std::get<HardCycle>(cy).gates) u = oracle::cnot(c.n, g.control, g.target) * u;
  }
  return u;
}

std::string error_of(const Circuit& c) {
  try {
    validate(c);
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

// Brute-force count of sets of disjoint ordered pairs on m qubits.
long brute_layers(int m) {
  std::function<long(unsigned)> rec = [&](unsigned used) -> long {
    int q = 0;
    while (q < m && (used >> q & 1u)) ++q;
    if (q == m) return 1;
    long total = rec(used | 1u << q);
    for (int p = q + 1; p < m; ++p)
      if (!(used >> p & 1u)) total += 2 * rec(used | 1u << q | 1u << p);
    return total;
  };
  return rec(0);
}

}  // namespace

TEST(Circuit, ValidateExamples) {
  EXPECT_EQ(error_of(Circuit(2, {EasyCycle::identity(2)})), "");
  const std::string easy_easy = error_of(Circuit(2, {EasyCycle::identity(2), EasyCycle::identity(2)}));
  EXPECT_NE(easy_easy.find("non-alternating"), std::string::npos);
  const std::string overlap =
      error_of(Circuit(3, {EasyCycle::identity(3), HardCycle{{{0, 1}, {1, 2}}}, EasyCycle::identity(3)}));
  EXPECT_NE(overlap.find("overlapping qubits"), std::string::npos);
  EXPECT_NE(error_of(Circuit(1, {})).find("no cycles"), std::string::npos);
}

TEST(Circuit, ValidateRejectsNonUnitary) {
  EasyCycle e = EasyCycle::identity(1);
  e.gates[0](0, 0) = 1.001;
  EXPECT_NE(error_of(Circuit(1, {e})).find("non-unitary"), std::string::npos);
}

TEST(Circuit, ValidateRejectsBadMeasurement) {
  Circuit c(2, {EasyCycle::identity(2)});
  c.measured_qubits = {0, 2};
  EXPECT_THROW(validate(c), CircuitError);
}

TEST(Circuit, IdealUnitaryExamples) {
  EXPECT_LT((ideal_unitary(Circuit(3, {EasyCycle::identity(3)})) - MatrixC::Identity(8, 8)).norm(), 1e-15);
  EasyCycle x0 = EasyCycle::identity(1);
  x0.gates[0] = gates::X();
  EXPECT_LT((ideal_unitary(Circuit(1, {x0, HardCycle{}, x0})) - MatrixC::Identity(2, 2)).norm(), 1e-15);

  EasyCycle h0 = EasyCycle::identity(2);
  h0.gates[0] = gates::H();
  const Circuit c(2, {h0, HardCycle{{{0, 1}}}, h0});
  oracle::M h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  oracle::M cx(4, 4);
  cx << 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0;
  const oracle::M hi = oracle::kron(h, oracle::M::Identity(2, 2));
  EXPECT_LT((ideal_unitary(c) - hi * cx * hi).norm(), 1e-14);
}

TEST(Circuit, IdealUnitaryMatchesDenseChain) {
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    const Circuit c = gen_uniform_random(2 + t % 3, 1 + t % 4, rng);
    EXPECT_LT((ideal_unitary(c) - dense_unitary(c)).norm(), 1e-12);
  }
}

TEST(Circuit, StructuredA) {
  Rng rng(12);
  const Circuit a = gen_structured(StructuredKind::A, 6, 10, rng);
  validate(a);
  EXPECT_EQ(a.depth(), 10);
  for (int k = 1; k <= 10; ++k) {
    EXPECT_EQ(a.hard(k), a.hard(1));
    EXPECT_EQ(a.hard(k).gates.size(), 3u);
  }
  const Circuit a0 = gen_structured(StructuredKind::A, 6, 0, rng);
  ASSERT_EQ(a0.cycles.size(), 1u);
  EXPECT_EQ(a0.easy(0), EasyCycle::uniform(6, gates::X()));
  EXPECT_THROW(gen_structured(StructuredKind::A, 5, 3, rng), std::invalid_argument);
}

TEST(Circuit, StructuredB) {
  Rng rng(13);
  const Circuit b = gen_structured(StructuredKind::B, 6, 50, rng);
  validate(b);
  std::set<std::string> layers;
  for (int k = 1; k <= 50; ++k) {
    std::string s;
    for (const auto& g : b.hard(k).gates) s += std::to_string(g.control) + std::to_string(g.target) + ";";
    layers.insert(s);
  }
  EXPECT_GT(layers.size(), 1u);
}

TEST(Circuit, UniformRandomScaleAndDeterminism) {
  Rng a(14), b(14);
  const Circuit c = gen_uniform_random(6, 5, a);
  validate(c);
  EXPECT_EQ(c.n, 6);
  EXPECT_EQ(c.depth(), 5);
  EXPECT_EQ(serialize(c), serialize(gen_uniform_random(6, 5, b)));
}

TEST(Circuit, HaarMoment) {
  Rng rng(15);
  const int draws = 20000;
  double s = 0, s2 = 0;
  for (int i = 0; i < draws; ++i) {
    const double v = std::norm(gates::haar_su2(rng)(0, 0));
    s += v;
    s2 += v * v;
  }
  const double mean = s / draws;
  // |<0|U|0>|^2 is uniform on [0,1] for Haar U: variance 1/12
  EXPECT_NEAR(mean, 0.5, 4 * std::sqrt(1.0 / 12 / draws));
  EXPECT_NEAR(s2 / draws, 1.0 / 3, 0.01);
}

TEST(Circuit, LayerCountsMatchEnumeration) {
  for (int m = 0; m <= 8; ++m) EXPECT_EQ(static_cast<long>(detail::layer_count(m)), brute_layers(m)) << m;
}

TEST(Circuit, UniformLayerSampling) {
  Rng rng(16);
  std::map<std::string, int> counts;
  const int draws = 30000;
  for (int i = 0; i < draws; ++i) {
    HardCycle h = sample_hard_layer(3, HardLayerDistribution::UniformLayers, rng);
    ASSERT_EQ(hard_cycle_violation(h, 3), "");
    std::string s;
    for (const auto& g : h.gates) s += std::to_string(g.control) + std::to_string(g.target);
    counts[s]++;
  }
  ASSERT_EQ(counts.size(), 7u);  // empty + 6 ordered pairs
  const double p = 1.0 / 7, sigma = std::sqrt(draws * p * (1 - p));
  for (const auto& [k, c] : counts) EXPECT_LT(std::abs(c - draws * p), 4 * sigma) << k;
}

TEST(Circuit, PerfectMatchingsCoverAllQubits) {
  Rng rng(17);
  for (int i = 0; i < 50; ++i) {
    const HardCycle h = sample_hard_layer(6, HardLayerDistribution::PerfectMatchings, rng);
    EXPECT_EQ(h.gates.size(), 3u);
    EXPECT_EQ(hard_cycle_violation(h, 6), "");
  }
}

TEST(Circuit, ConcatenateMatchesProduct) {
  Rng rng(18);
  const Circuit a = gen_uniform_random(3, 2, rng), b = gen_uniform_random(3, 3, rng);
  const Circuit ab = concatenate(a, b);
  validate(ab);
  EXPECT_EQ(ab.depth(), 5);
  EXPECT_LT((ideal_unitary(ab) - ideal_unitary(b) * ideal_unitary(a)).norm(), 1e-12);
}

TEST(CircuitIo, RoundTripStructured) {
  Rng rng(19);
  const Circuit a = gen_structured(StructuredKind::A, 6, 10, rng);
  EXPECT_EQ(parse_circuit(serialize(a)), a);
}

TEST(CircuitIo, RoundTripRandomIsExact) {
  Rng rng(20);
  Circuit c = gen_uniform_random(4, 3, rng);
  c.measured_qubits = {3, 1};
  c.measurement.shots = 77;
  EXPECT_EQ(parse_circuit(serialize(c)), c);
}

TEST(CircuitIo, EmptyFile) {
  try {
    parse_circuit("");
    FAIL();
  } catch (const CircuitError& e) {
    EXPECT_NE(std::string(e.what()).find("no cycles"), std::string::npos);
  }
}

TEST(CircuitIo, UnknownGateNamed) {
  try {
    parse_circuit("qubits 2\neasy q0: H q1: frob\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("frob"), std::string::npos);
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(CircuitIo, HandWritten) {
  const Circuit c = parse_circuit(
      "# bell pair\n"
      "qubits 2\n"
      "easy q0: H q1: I\n"
      "hard: cnot(0,1)\n"
      "easy q0: I q1: I\n");
  EXPECT_EQ(c.depth(), 1);
  const VectorC psi = ideal_state(c);
  EXPECT_NEAR(std::norm(psi[0]), 0.5, 1e-15);
  EXPECT_NEAR(std::norm(psi[3]), 0.5, 1e-15);
}

TEST(CircuitIo, TrailingComments) {
  const Circuit c = parse_circuit(
      "qubits 3  # three\n"
      "measure 0 2 # skip q1\n"
      "shots 64\n"
      "easy q0: H q1: I q2: I  # prepare\n"
      "hard: cnot(0,1)#tight\n"
      "easy q0: I q1: I q2: I\n");
  EXPECT_EQ(c.measured_qubits, (std::vector<int>{0, 2}));
  EXPECT_EQ(c.measurement.shots, 64);
  EXPECT_EQ(c.hard(1).gates.size(), 1u);
}

TEST(CircuitIo, OverlapReported) {
  EXPECT_THROW(parse_circuit("qubits 3\neasy\nhard: cnot(0,1) cnot(1,2)\neasy\n"), std::exception);
}
