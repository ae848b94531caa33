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
#include <string>
#include <vector>

#include "twirlc/common.hpp"

namespace twirlc {

/// A controlled-not between two distinct qubits.
struct Cnot {
  int control = 0;
  int target = 1;

  friend bool operator==(const Cnot&, const Cnot&) = default;
};

/// One round of hard gates: CNOTs on pairwise-disjoint qubits, identity
/// elsewhere.
struct HardCycle {
  std::vector<Cnot> gates;

  friend bool operator==(const HardCycle&, const HardCycle&) = default;

  bool empty() const { return gates.empty(); }
};

/// Checks index range and disjointness; returns an empty string when valid.
inline std::string hard_cycle_violation(const HardCycle& h, int n) {
  std::vector<bool> used(static_cast<size_t>(std::max(n, 0)), false);
  for (const auto& g : h.gates) {
    if (g.control < 0 || g.control >= n || g.target < 0 || g.target >= n)
      return "qubit index out of range in cnot(" + std::to_string(g.control) +
             "," + std::to_string(g.target) + ")";
    if (g.control == g.target)
      return "cnot control equals target (" + std::to_string(g.control) + ")";
    if (used[g.control] || used[g.target])
      return "overlapping qubits in cnot(" + std::to_string(g.control) + "," +
             std::to_string(g.target) + ")";
    used[g.control] = used[g.target] = true;
  }
  return {};
}

}  // namespace twirlc
