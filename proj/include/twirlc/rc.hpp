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

#include <cstdint>
#include <functional>
#include <vector>

#include "twirlc/circuit.hpp"
#include "twirlc/distribution.hpp"
#include "twirlc/pauli.hpp"

namespace twirlc {

/// A randomly compiled circuit. The final twirl is never a gate: it is kept
/// as `final_frame` and undone by relabeling measurement outcomes.
struct CompiledCircuit {
  Circuit circuit;
  PhasedPauli final_frame;
  std::uint64_t seed = 0;
  std::vector<PauliString> twirls;  // T_0 .. T_M
};

struct RandomizationEnsemble {
  Circuit bare;
  std::vector<CompiledCircuit> members;

  int size() const { return static_cast<int>(members.size()); }
};

/// Dressed easy cycle T * C * Tc; the global phase of Tc is dropped.
inline EasyCycle dress(const EasyCycle& easy, const PauliString& twirl,
                       const PhasedPauli& correction) {
  EasyCycle out = easy;
  for (int q = 0; q < easy.n(); ++q)
    out.gates[q] = pauli_matrix(twirl[q]) * easy.gates[q] * pauli_matrix(correction.pauli[q]);
  return out;
}

/// Compiles with an explicit twirl per easy cycle (twirls.size() == M + 1).
inline CompiledCircuit compile_with_twirls(const Circuit& bare, std::vector<PauliString> twirls) {
  validate(bare);
  const int m = bare.depth();
  require(static_cast<int>(twirls.size()) == m + 1, "compile_with_twirls: need M+1 twirls");
  CompiledCircuit out;
  out.circuit = bare;
  PhasedPauli correction(PauliString::identity(bare.n));
  for (int k = 0; k <= m; ++k) {
    require(twirls[k].n() == bare.n, "compile_with_twirls: twirl qubit count mismatch");
    out.circuit.easy(k) = dress(bare.easy(k), twirls[k], correction);
    if (k < m) correction = correction_twirl(bare.hard(k + 1), twirls[k]);
  }
  out.final_frame = PhasedPauli(twirls[m]).dagger();
  out.twirls = std::move(twirls);
  return out;
}

template <class URBG>
std::vector<PauliString> sample_twirls(int n, int m, URBG& rng) {
  std::vector<PauliString> t;
  t.reserve(static_cast<std::size_t>(m + 1));
  for (int k = 0; k <= m; ++k) t.push_back(sample_uniform(n, rng));
  return t;
}

inline CompiledCircuit compile_once(const Circuit& bare, std::uint64_t seed) {
  validate(bare);
  Rng rng(seed);
  CompiledCircuit out = compile_with_twirls(bare, sample_twirls(bare.n, bare.depth(), rng));
  out.seed = seed;
  return out;
}

/// Member k is compiled from the substream derive_seed(seed, k).
inline RandomizationEnsemble compile_ensemble(const Circuit& bare, int n_rc, std::uint64_t seed) {
  require(n_rc >= 1, "compile_ensemble: n_rc must be >= 1");
  RandomizationEnsemble e;
  e.bare = bare;
  e.members.reserve(static_cast<std::size_t>(n_rc));
  for (int k = 0; k < n_rc; ++k) e.members.push_back(compile_once(bare, derive_seed(seed, static_cast<std::uint64_t>(k))));
  return e;
}

/// Outcome mask flipped by a frame: bit i set iff the frame acts as X or Y on
/// measured qubit i. The frame's phase has no effect on measurement statistics.
inline std::size_t frame_flip_mask(const PhasedPauli& frame, const std::vector<int>& measured) {
  std::size_t mask = 0;
  for (int q : measured) {
    require(q >= 0 && q < frame.n(), "frame_flip_mask: measured qubit out of range");
    mask = (mask << 1) | static_cast<std::size_t>(pauli_x_bit(frame.pauli[q]));
  }
  return mask;
}

inline Histogram postprocess_counts(const Histogram& counts, const PhasedPauli& frame,
                                    const std::vector<int>& measured) {
  const std::vector<bool> flip = [&] {
    std::vector<bool> f;
    for (int q : measured) {
      require(q >= 0 && q < frame.n(), "postprocess_counts: measured qubit out of range");
      f.push_back(pauli_x_bit(frame.pauli[q]));
    }
    return f;
  }();
  Histogram out;
  for (const auto& [orig, c] : counts) {
    std::string key = orig;
    if (key.size() != measured.size())
      throw std::invalid_argument("postprocess_counts: key '" + key + "' has length " +
                                  std::to_string(key.size()) + ", expected " +
                                  std::to_string(measured.size()));
    for (std::size_t i = 0; i < key.size(); ++i) {
      if (key[i] != '0' && key[i] != '1')
        throw std::invalid_argument("postprocess_counts: key '" + key + "' is not a bitstring");
      if (flip[i]) key[i] = key[i] == '0' ? '1' : '0';
    }
    out[key] += c;
  }
  return out;
}

inline Distribution postprocess_distribution(const Distribution& d, const PhasedPauli& frame,
                                             const std::vector<int>& measured) {
  require(d.bits() == static_cast<int>(measured.size()), "postprocess_distribution: width mismatch");
  return d.xor_relabel(frame_flip_mask(frame, measured));
}

/// Maps a compiled circuit to its frame-corrected outcome distribution.
using Executor = std::function<Distribution(const CompiledCircuit&)>;

inline Distribution average_distribution(const RandomizationEnsemble& ensemble,
                                         const Executor& executor) {
  require(!ensemble.members.empty(), "average_distribution: empty ensemble");
  Distribution acc;
  bool first = true;
  for (const auto& m : ensemble.members) {
    Distribution d = executor(m);
    if (first) {
      acc = Distribution::zeros(d.bits());
      first = false;
    }
    require(d.bits() == acc.bits(), "average_distribution: executor width mismatch");
    for (std::size_t o = 0; o < d.size(); ++o) acc[o] += d[o];
  }
  for (std::size_t o = 0; o < acc.size(); ++o) acc[o] /= static_cast<double>(ensemble.size());
  return acc;
}

}  // namespace twirlc
