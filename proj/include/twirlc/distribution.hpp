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
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "twirlc/common.hpp"

namespace twirlc {

/// Shot counts keyed by outcome bitstring (first character = first measured qubit).
using Histogram = std::map<std::string, std::uint64_t>;

/// Probability distribution over the 2^bits outcomes of a measurement. Outcome
/// index o has its first measured qubit in the most significant bit.
class Distribution {
 public:
  Distribution() = default;
  Distribution(int bits, std::vector<double> probs) : bits_(bits), probs_(std::move(probs)) {
    require(bits >= 0 && bits < 31, "Distribution: bit count out of range");
    require(probs_.size() == (std::size_t{1} << bits), "Distribution: size must be 2^bits");
  }

  static Distribution zeros(int bits) {
    return Distribution(bits, std::vector<double>(std::size_t{1} << bits, 0.0));
  }

  static Distribution from_counts(const Histogram& counts, int bits) {
    Distribution d = zeros(bits);
    std::uint64_t total = 0;
    for (const auto& [key, c] : counts) {
      d.probs_[index_of(key, bits)] += static_cast<double>(c);
      total += c;
    }
    require(total > 0, "Distribution::from_counts: empty histogram");
    for (auto& p : d.probs_) p /= static_cast<double>(total);
    return d;
  }

  static std::size_t index_of(const std::string& key, int bits) {
    if (static_cast<int>(key.size()) != bits)
      throw std::invalid_argument("outcome '" + key + "' has length " + std::to_string(key.size()) +
                                  ", expected " + std::to_string(bits));
    std::size_t o = 0;
    for (char c : key) {
      if (c != '0' && c != '1') throw std::invalid_argument("outcome '" + key + "' is not a bitstring");
      o = (o << 1) | static_cast<std::size_t>(c == '1');
    }
    return o;
  }

  static std::string key_of(std::size_t o, int bits) {
    std::string s(static_cast<std::size_t>(bits), '0');
    for (int i = bits - 1; i >= 0; --i, o >>= 1) s[static_cast<std::size_t>(i)] = (o & 1) ? '1' : '0';
    return s;
  }

  int bits() const { return bits_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t o) const { return probs_[o]; }
  double& operator[](std::size_t o) { return probs_[o]; }
  double at(const std::string& key) const { return probs_[index_of(key, bits_)]; }
  const std::vector<double>& probs() const { return probs_; }

  double total() const { return std::accumulate(probs_.begin(), probs_.end(), 0.0); }

  /// Nonnegative entries (to -tol) summing to one within tol.
  bool is_valid(double tol = 1e-9) const {
    for (double p : probs_)
      if (!(p >= -tol)) return false;
    return std::abs(total() - 1.0) <= tol;
  }

  /// Relabels outcome o as o ^ mask.
  Distribution xor_relabel(std::size_t mask) const {
    Distribution out = zeros(bits_);
    for (std::size_t o = 0; o < probs_.size(); ++o) out.probs_[o ^ mask] = probs_[o];
    return out;
  }

  std::map<std::string, double> to_map() const {
    std::map<std::string, double> m;
    for (std::size_t o = 0; o < probs_.size(); ++o)
      if (probs_[o] != 0.0) m[key_of(o, bits_)] = probs_[o];
    return m;
  }

 private:
  int bits_ = 0;
  std::vector<double> probs_{1.0};
};

}  // namespace twirlc
