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

// Bounds on how well an adversarial environment can track the net twirl
// parity of one qubit across several rounds.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "twirlc/common.hpp"

namespace twirlc {

/// Per-round upper bounds p_k on guessing the parity of round k.
struct ParityProfile {
  std::vector<double> p;
  int qubit = 0;

  void validate() const {
    for (std::size_t k = 0; k < p.size(); ++k)
      if (!(p[k] >= 0.5 && p[k] <= 1.0))
        throw std::invalid_argument("ParityProfile: p[" + std::to_string(k) + "] = " +
                                    std::to_string(p[k]) + " outside [1/2, 1]");
  }
};

/// 1/2 prod_k (2 p_k - 1) + 1/2.
inline double net_parity_bound(const ParityProfile& profile) {
  profile.validate();
  double prod = 1.0;
  for (double pk : profile.p) prod *= 2 * pk - 1;
  return 0.5 * prod + 0.5;
}

/// Two-state chain started in "correct"; each round keeps the state with
/// probability p_k and flips it otherwise. Returns the empirical frequency of
/// ending in "correct".
template <class URBG>
double markov_oracle(const ParityProfile& profile, long samples, URBG& rng) {
  profile.validate();
  require(samples >= 1, "markov_oracle: samples must be >= 1");
  std::vector<std::bernoulli_distribution> keep;
  for (double pk : profile.p) keep.emplace_back(pk);
  long hits = 0;
  for (long s = 0; s < samples; ++s) {
    bool correct = true;
    for (auto& b : keep)
      if (!b(rng)) correct = !correct;
    hits += correct;
  }
  return static_cast<double>(hits) / static_cast<double>(samples);
}

/// Smallest M with (1/2)(2 p_max - 1)^M < threshold.
inline int decay_length(double p_max, double threshold) {
  require(threshold > 0, "decay_length: threshold must be positive");
  if (p_max >= 1.0) throw std::invalid_argument("decay_length: non-decaying profile (p_max = 1)");
  require(p_max > 0.5, "decay_length: p_max must lie in (1/2, 1)");
  if (threshold >= 0.5) return 0;
  const double m = std::log(2 * threshold) / std::log(2 * p_max - 1);
  int mc = static_cast<int>(std::ceil(m));
  // Guard the boundary against rounding in the logarithms.
  auto excess = [&](int k) { return 0.5 * std::pow(2 * p_max - 1, k); };
  while (mc > 0 && excess(mc - 1) < threshold) --mc;
  while (excess(mc) >= threshold) ++mc;
  return std::max(mc, 1);
}

inline double binary_entropy(double p) {
  if (p <= 0 || p >= 1) return 0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

/// Fano helper: lower-branch inverse of the binary entropy, giving the bound
/// 1 - h^-1(theta) on the parity guessing probability for a conditional
/// entropy of theta bits.
inline double guess_bound_from_entropy(double theta_bits) {
  require(theta_bits >= 0 && theta_bits <= 1, "guess_bound_from_entropy: entropy must lie in [0, 1] bits");
  double lo = 0, hi = 0.5;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (binary_entropy(mid) < theta_bits ? lo : hi) = mid;
  }
  return 1.0 - 0.5 * (lo + hi);
}

}  // namespace twirlc
