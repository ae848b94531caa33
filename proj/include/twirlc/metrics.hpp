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
#include <map>
#include <string>
#include <vector>

#include "twirlc/distribution.hpp"

namespace twirlc {

/// Total variation distance (1/2) sum_j |p_j - q_j|.
inline double tvd(const Distribution& p, const Distribution& q) {
  if (p.bits() != q.bits()) throw std::invalid_argument("tvd: outcome spaces differ");
  if (!p.is_valid() || !q.is_valid()) throw std::invalid_argument("tvd: invalid distribution");
  double s = 0;
  for (std::size_t o = 0; o < p.size(); ++o) s += std::abs(p[o] - q[o]);
  return 0.5 * s;
}

/// Keyed variant; outcomes missing from one side count as probability zero.
inline double tvd(const std::map<std::string, double>& p, const std::map<std::string, double>& q) {
  auto check = [](const std::map<std::string, double>& d) {
    double t = 0;
    for (const auto& [k, v] : d) {
      if (v < -1e-9) throw std::invalid_argument("tvd: negative probability for '" + k + "'");
      t += v;
    }
    if (std::abs(t - 1.0) > 1e-9) throw std::invalid_argument("tvd: probabilities do not sum to 1");
  };
  check(p);
  check(q);
  double s = 0;
  for (const auto& [k, v] : p) {
    auto it = q.find(k);
    s += std::abs(v - (it == q.end() ? 0.0 : it->second));
  }
  for (const auto& [k, v] : q)
    if (!p.contains(k)) s += std::abs(v);
  return 0.5 * s;
}

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
  int count = 0;
};

inline MeanStderr mean_stderr(const std::vector<double>& xs) {
  MeanStderr r;
  r.count = static_cast<int>(xs.size());
  if (xs.empty()) return r;
  double s = 0;
  for (double x : xs) s += x;
  r.mean = s / r.count;
  if (r.count > 1) {
    double v = 0;
    for (double x : xs) v += (x - r.mean) * (x - r.mean);
    r.stderr_ = std::sqrt(v / (r.count - 1) / r.count);
  }
  return r;
}

/// Linear-interpolated quantile of sorted data.
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

struct Stability {
  double mean = 0.0;
  double spread = 0.0;  // interquartile range
};

/// Mean and interquartile spread of per-member TVDs.
inline Stability stability_statistic(const std::vector<double>& member_tvds) {
  if (member_tvds.size() < 2) throw std::invalid_argument("stability_statistic: need at least 2 members");
  std::vector<double> s = member_tvds;
  std::sort(s.begin(), s.end());
  Stability out;
  out.mean = mean_stderr(s).mean;
  out.spread = quantile_sorted(s, 0.75) - quantile_sorted(s, 0.25);
  return out;
}

/// Spearman rank correlation (average ranks for ties).
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "spearman: need two equal-length samples");
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * static_cast<double>(i + j) + 1.0;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  const double mx = mean_stderr(rx).mean, my = mean_stderr(ry).mean;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "loglog_slope: need at least two points");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(x[i] > 0 && y[i] > 0, "loglog_slope: values must be positive");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  const double mx = mean_stderr(lx).mean, my = mean_stderr(ly).mean;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace twirlc
