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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "twirlc/circuit.hpp"
#include "twirlc/metrics.hpp"
#include "twirlc/noise.hpp"
#include "twirlc/rc.hpp"

namespace twirlc {

inline constexpr int kResultSchemaVersion = 1;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A module error raised while evaluating one sweep point.
class ExperimentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { Fig2NonMarkov, Fig3NrcSweep, Fig4RatioSweep, RddCompare };

inline std::string kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Fig2NonMarkov: return "fig2_nonmarkov";
    case ExperimentKind::Fig3NrcSweep: return "fig3_nrc_sweep";
    case ExperimentKind::Fig4RatioSweep: return "fig4_ratio_sweep";
    case ExperimentKind::RddCompare: return "rdd_compare";
  }
  return "";
}

/// Declarative sweep. The meaning of `grid` depends on the kind:
///   fig2_nonmarkov   cycle counts M
///   fig3_nrc_sweep   ensemble sizes N_RC
///   fig4_ratio_sweep hard-gate overrotations eps_hard
///   rdd_compare      pulse spacings dt at fixed total_time
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Fig3NrcSweep;
  std::string name;
  std::string output = ".";
  std::optional<std::uint64_t> seed;
  std::vector<double> grid;
  int qubits = 6;
  int cycles = 5;
  int draws = 100;
  int n_rc = 20;
  int shots = 0;  // 0 = exact distributions
  double eps_easy = 0.01;
  double eps_hard = 0.05;
  bool decoherence = true;
  DecoherenceModel decoh;
  HardLayerDistribution hard_layers = HardLayerDistribution::UniformLayers;
  std::string circuits = "AB";  // fig2: which structured families
  double j_mean = 0.0;
  double j_variance = 1e-3;
  double total_time = 64 * std::numbers::pi;

  std::string label() const { return name.empty() ? kind_name(kind) : name; }

  void validate() const {
    auto need = [](bool ok, const std::string& msg) {
      if (!ok) throw ConfigError(msg);
    };
    need(seed.has_value(), "config: seed is required");
    need(!grid.empty(), "config: grid must be nonempty");
    need(draws >= 1, "config: draws must be >= 1");
    need(shots >= 0, "config: shots must be >= 0");
    need(qubits >= 1, "config: qubits must be >= 1");
    need(t_ok(), "config: t1, t2, t_single, t_double must be positive with t2 <= 2 t1");
    need(j_variance >= 0, "config: j_variance must be >= 0");
    for (std::size_t i = 1; i < grid.size(); ++i)
      for (std::size_t j = 0; j < i; ++j) need(grid[i] != grid[j], "config: duplicate grid point");
    switch (kind) {
      case ExperimentKind::Fig2NonMarkov:
        need(qubits >= 2 && qubits % 2 == 0, "config: fig2_nonmarkov needs an even qubit count >= 2");
        need(circuits == "A" || circuits == "B" || circuits == "AB", "config: circuits must be A, B or AB");
        for (double g : grid) need(g >= 0 && g == std::floor(g), "config: fig2 grid entries are cycle counts");
        break;
      case ExperimentKind::Fig3NrcSweep:
        need(qubits >= 2 && cycles >= 0, "config: fig3 needs qubits >= 2 and cycles >= 0");
        for (double g : grid) need(g >= 1 && g == std::floor(g), "config: fig3 grid entries are ensemble sizes >= 1");
        break;
      case ExperimentKind::Fig4RatioSweep:
        need(qubits >= 2 && cycles >= 0, "config: fig4 needs qubits >= 2 and cycles >= 0");
        need(n_rc >= 1, "config: n_rc must be >= 1");
        break;
      case ExperimentKind::RddCompare:
        need(total_time > 0, "config: total_time must be positive");
        for (double g : grid) {
          need(g > 0, "config: rdd grid entries are positive pulse spacings");
          const double rounds = total_time / g;
          need(std::abs(rounds - std::round(rounds)) < 1e-9 * rounds && std::round(rounds) >= 1,
               "config: total_time must be an integer multiple of every pulse spacing");
        }
        break;
    }
  }

  bool t_ok() const {
    return decoh.t1 > 0 && decoh.t2 > 0 && decoh.t_single > 0 && decoh.t_double > 0 &&
           decoh.t2 <= 2 * decoh.t1 * (1 + 1e-12);
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["kind"] = kind_name(kind);
    j["name"] = label();
    j["output"] = output;
    j["seed"] = seed.value_or(0);
    j["grid"] = grid;
    j["qubits"] = qubits;
    j["cycles"] = cycles;
    j["draws"] = draws;
    j["n_rc"] = n_rc;
    j["shots"] = shots;
    j["eps_easy"] = eps_easy;
    j["eps_hard"] = eps_hard;
    j["decoherence"] = decoherence;
    j["t1"] = decoh.t1;
    j["t2"] = decoh.t2;
    j["t_single"] = decoh.t_single;
    j["t_double"] = decoh.t_double;
    j["hard_layers"] = hard_layers == HardLayerDistribution::UniformLayers ? "uniform" : "matchings";
    j["circuits"] = circuits;
    j["j_mean"] = j_mean;
    j["j_variance"] = j_variance;
    j["total_time"] = total_time;
    return j;
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_number(const std::string& key, const std::string& v) {
  std::string t = v;
  double scale = 1;
  // "pi" multiples: "2pi", "pi", "0.5*pi"
  if (auto p = t.find("pi"); p != std::string::npos && p + 2 == t.size()) {
    scale = std::numbers::pi;
    t = trim(t.substr(0, p));
    if (!t.empty() && t.back() == '*') t.pop_back();
    if (t.empty()) t = "1";
  }
  std::size_t used = 0;
  double x = 0;
  try {
    x = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
  }
  if (used != t.size()) throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
  return x * scale;
}

inline int parse_int(const std::string& key, const std::string& v) {
  const double x = parse_number(key, v);
  if (x != std::floor(x) || std::abs(x) > 2e9) throw ConfigError("config: '" + key + "' expects an integer, got '" + v + "'");
  return static_cast<int>(x);
}

inline std::vector<double> parse_grid(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("config: empty entry in '" + key + "'");
    out.push_back(parse_number(key, item));
  }
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "off" || v == "0" || v == "no") return false;
  throw ConfigError("config: '" + key + "' expects a boolean, got '" + v + "'");
}

}  // namespace detail

/// Parses `key = value` lines; '#' starts a comment.
inline ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::map<std::string, int> seen;
  bool have_kind = false;
  std::stringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    const std::string line = detail::trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string v = detail::trim(line.substr(eq + 1));
    if (key.empty() || v.empty())
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    if (seen[key]++) throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");

    if (key == "kind") {
      have_kind = true;
      if (v == "fig2_nonmarkov") cfg.kind = ExperimentKind::Fig2NonMarkov;
      else if (v == "fig3_nrc_sweep") cfg.kind = ExperimentKind::Fig3NrcSweep;
      else if (v == "fig4_ratio_sweep") cfg.kind = ExperimentKind::Fig4RatioSweep;
      else if (v == "rdd_compare") cfg.kind = ExperimentKind::RddCompare;
      else throw ConfigError("config line " + std::to_string(line_no) + ": unknown kind '" + v + "'");
    } else if (key == "name") cfg.name = v;
    else if (key == "output") cfg.output = v;
    else if (key == "seed") {
      try {
        std::size_t used = 0;
        cfg.seed = std::stoull(v, &used);
        if (used != v.size() || v.front() == '-') throw std::invalid_argument(v);
      } catch (const std::exception&) {
        throw ConfigError("config: 'seed' expects a nonnegative integer, got '" + v + "'");
      }
    }
    else if (key == "grid") cfg.grid = detail::parse_grid(key, v);
    else if (key == "qubits") cfg.qubits = detail::parse_int(key, v);
    else if (key == "cycles") cfg.cycles = detail::parse_int(key, v);
    else if (key == "draws") cfg.draws = detail::parse_int(key, v);
    else if (key == "n_rc") cfg.n_rc = detail::parse_int(key, v);
    else if (key == "shots") cfg.shots = detail::parse_int(key, v);
    else if (key == "eps_easy") cfg.eps_easy = detail::parse_number(key, v);
    else if (key == "eps_hard") cfg.eps_hard = detail::parse_number(key, v);
    else if (key == "decoherence") cfg.decoherence = detail::parse_bool(key, v);
    else if (key == "t1") cfg.decoh.t1 = detail::parse_number(key, v);
    else if (key == "t2") cfg.decoh.t2 = detail::parse_number(key, v);
    else if (key == "t_single") cfg.decoh.t_single = detail::parse_number(key, v);
    else if (key == "t_double") cfg.decoh.t_double = detail::parse_number(key, v);
    else if (key == "hard_layers") {
      if (v == "uniform") cfg.hard_layers = HardLayerDistribution::UniformLayers;
      else if (v == "matchings") cfg.hard_layers = HardLayerDistribution::PerfectMatchings;
      else throw ConfigError("config: 'hard_layers' must be uniform or matchings, got '" + v + "'");
    }
    else if (key == "circuits") cfg.circuits = v;
    else if (key == "j_mean") cfg.j_mean = detail::parse_number(key, v);
    else if (key == "j_variance") cfg.j_variance = detail::parse_number(key, v);
    else if (key == "total_time") cfg.total_time = detail::parse_number(key, v);
    else throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  if (!have_kind) throw ConfigError("config: kind is required");
  cfg.validate();
  return cfg;
}

struct ResultRow {
  double point = 0;
  std::string statistic;
  double mean = 0;
  double stderr_ = 0;
  int count = 0;
};

struct ResultTable {
  ExperimentKind kind = ExperimentKind::Fig3NrcSweep;
  std::vector<ResultRow> rows;

  void add(double point, const std::string& stat, const std::vector<double>& samples) {
    const MeanStderr s = mean_stderr(samples);
    rows.push_back({point, stat, s.mean, s.stderr_, static_cast<int>(s.count)});
  }

  const ResultRow* find(double point, const std::string& stat) const {
    for (const auto& r : rows)
      if (r.point == point && r.statistic == stat) return &r;
    return nullptr;
  }

  const ResultRow& at(double point, const std::string& stat) const {
    if (const auto* r = find(point, stat)) return *r;
    throw std::out_of_range("ResultTable: no row for " + stat + " at " + std::to_string(point));
  }

  std::vector<std::string> statistics() const {
    std::vector<std::string> out;
    for (const auto& r : rows)
      if (std::find(out.begin(), out.end(), r.statistic) == out.end()) out.push_back(r.statistic);
    return out;
  }

  std::string to_csv() const {
    std::string out = "point,statistic,mean,stderr,count\n";
    char buf[160];
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, "%.17g,%s,%.17g,%.17g,%d\n", r.point, r.statistic.c_str(), r.mean,
                    r.stderr_, r.count);
      out += buf;
    }
    return out;
  }
};

namespace detail {

inline std::string point_label(ExperimentKind k, double g) {
  char buf[64];
  switch (k) {
    case ExperimentKind::Fig2NonMarkov: std::snprintf(buf, sizeof buf, "M=%g", g); break;
    case ExperimentKind::Fig3NrcSweep: std::snprintf(buf, sizeof buf, "N_RC=%g", g); break;
    case ExperimentKind::Fig4RatioSweep: std::snprintf(buf, sizeof buf, "eps_hard=%g", g); break;
    case ExperimentKind::RddCompare: std::snprintf(buf, sizeof buf, "dt=%g", g); break;
  }
  return buf;
}

/// Runs fn and re-raises module errors tagged with the sweep point.
template <class F>
auto at_point(ExperimentKind k, double g, F&& fn) {
  try {
    return fn();
  } catch (const ResourceError& e) {
    throw ResourceError(kind_name(k) + " at " + point_label(k, g) + ": " + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ExperimentError(kind_name(k) + " at " + point_label(k, g) + ": " + e.what());
  }
}

enum Stream : std::uint64_t { kCircuit = 1, kTwirl = 2, kCoupling = 3, kShots = 4, kPulses = 5 };

inline Distribution maybe_sample(const Distribution& d, int shots, std::uint64_t seed) {
  if (shots == 0) return d;
  Rng rng(seed);
  return Distribution::from_counts(sample_counts(d, shots, rng), d.bits());
}

inline OverrotationNoise overrot_noise(const ExperimentConfig& cfg, double eps_hard) {
  OverrotationNoise n;
  n.rotation = {cfg.eps_easy, eps_hard};
  if (cfg.decoherence) n.decoherence = cfg.decoh;
  return n;
}

inline ResultTable run_fig2(const ExperimentConfig& cfg) {
  LatticeModel lm;
  lm.n_sys = cfg.qubits;
  lm.j_mean = cfg.j_mean;
  lm.j_variance = cfg.j_variance;
  const int m_max = static_cast<int>(*std::max_element(cfg.grid.begin(), cfg.grid.end()));
  at_point(cfg.kind, m_max, [&] { lm.validate(); return 0; });

  std::vector<std::string> stats;
  for (char fam : cfg.circuits) {
    stats.push_back(std::string("r_bare_") + fam);
    stats.push_back(std::string("r_rc_") + fam);
  }
  // samples[stat][grid index][draw]
  std::map<std::string, std::vector<std::vector<double>>> samples;
  for (const auto& s : stats) samples[s].assign(cfg.grid.size(), {});

  for (int d = 0; d < cfg.draws; ++d) {
    Rng jrng(derive_seed(*cfg.seed, static_cast<std::uint64_t>(d), kCoupling));
    const auto j = lm.sample_couplings(jrng);
    Rng crng(derive_seed(*cfg.seed, static_cast<std::uint64_t>(d), kCircuit));
    Rng trng(derive_seed(*cfg.seed, static_cast<std::uint64_t>(d), kTwirl));
    const auto twirls = sample_twirls(cfg.qubits, m_max, trng);
    for (char fam : cfg.circuits) {
      const Circuit c = gen_structured(fam == 'A' ? StructuredKind::A : StructuredKind::B, cfg.qubits, m_max,
                                       crng, cfg.hard_layers);
      const auto bare = at_point(cfg.kind, m_max, [&] { return lattice_error_trajectory(c, lm, j); });
      const auto rc = at_point(cfg.kind, m_max, [&] { return lattice_error_trajectory(c, lm, j, &twirls); });
      for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
        const auto m = static_cast<std::size_t>(cfg.grid[g]);
        samples[std::string("r_bare_") + fam][g].push_back(bare.error_rates[m]);
        samples[std::string("r_rc_") + fam][g].push_back(rc.error_rates[m]);
      }
    }
  }
  ResultTable t;
  t.kind = cfg.kind;
  for (std::size_t g = 0; g < cfg.grid.size(); ++g)
    for (const auto& s : stats) t.add(cfg.grid[g], s, samples[s][g]);
  return t;
}

inline ResultTable run_fig3(const ExperimentConfig& cfg) {
  const int n_max = static_cast<int>(*std::max_element(cfg.grid.begin(), cfg.grid.end()));
  const OverrotationNoise noise = overrot_noise(cfg, cfg.eps_hard);
  std::vector<double> bare_tvd;
  std::vector<std::vector<double>> rc_tvd(cfg.grid.size());
  std::vector<double> trace(cfg.grid.size());
  std::vector<double> member_tvd;

  for (int d = 0; d < cfg.draws; ++d) {
    const auto ud = static_cast<std::uint64_t>(d);
    Rng crng(derive_seed(*cfg.seed, ud, kCircuit));
    const Circuit c = gen_uniform_random(cfg.qubits, cfg.cycles, crng, cfg.hard_layers);
    const Distribution ideal = detail::measured_distribution(kernels::probabilities(ideal_state(c)), c.n,
                                                             c.measured_qubits);
    const auto ens = compile_ensemble(c, n_max, derive_seed(*cfg.seed, ud, kTwirl));
    const double g0 = cfg.grid.front();
    const SimResult bare = at_point(cfg.kind, g0, [&] {
      return run_overrotation(c, noise.rotation, noise.decoherence);
    });
    bare_tvd.push_back(tvd(ideal, maybe_sample(bare.distribution, cfg.shots, derive_seed(derive_seed(*cfg.seed, ud, kShots), 0))));

    std::vector<Distribution> members;
    for (int k = 0; k < n_max; ++k) {
      const auto& mem = ens.members[static_cast<std::size_t>(k)];
      const SimResult r = at_point(cfg.kind, g0, [&] {
        return run_overrotation(mem.circuit, noise.rotation, noise.decoherence, mem.final_frame);
      });
      members.push_back(maybe_sample(r.distribution, cfg.shots,
                                     derive_seed(derive_seed(*cfg.seed, ud, kShots), static_cast<std::uint64_t>(k + 1))));
      member_tvd.push_back(tvd(ideal, members.back()));
    }
    Distribution acc = Distribution::zeros(ideal.bits());
    int used = 0;
    std::vector<std::pair<int, std::size_t>> order;
    for (std::size_t g = 0; g < cfg.grid.size(); ++g) order.emplace_back(static_cast<int>(cfg.grid[g]), g);
    std::sort(order.begin(), order.end());
    for (const auto& [nrc, g] : order) {
      for (; used < nrc; ++used)
        for (std::size_t o = 0; o < acc.size(); ++o) acc[o] += members[static_cast<std::size_t>(used)][o];
      Distribution avg = acc;
      for (std::size_t o = 0; o < avg.size(); ++o) avg[o] /= nrc;
      const double v = tvd(ideal, avg);
      rc_tvd[g].push_back(v);
      if (d == 0) trace[g] = v;
    }
  }
  std::vector<double> sorted = member_tvd;
  std::sort(sorted.begin(), sorted.end());
  const double iqr = sorted.size() >= 2 ? quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25) : 0.0;

  ResultTable t;
  t.kind = cfg.kind;
  for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
    t.add(cfg.grid[g], "tvd_bare", bare_tvd);
    t.add(cfg.grid[g], "tvd_rc", rc_tvd[g]);
    t.rows.push_back({cfg.grid[g], "tvd_rc_single_run", trace[g], 0.0, 1});
    t.rows.push_back({cfg.grid[g], "member_tvd_iqr", iqr, 0.0, static_cast<int>(member_tvd.size())});
  }
  return t;
}

inline ResultTable run_fig4(const ExperimentConfig& cfg) {
  std::vector<std::vector<double>> bare(cfg.grid.size()), rc(cfg.grid.size()), gap(cfg.grid.size());
  for (int d = 0; d < cfg.draws; ++d) {
    const auto ud = static_cast<std::uint64_t>(d);
    Rng crng(derive_seed(*cfg.seed, ud, kCircuit));
    const Circuit c = gen_uniform_random(cfg.qubits, cfg.cycles, crng, cfg.hard_layers);
    const Distribution ideal = detail::measured_distribution(kernels::probabilities(ideal_state(c)), c.n,
                                                             c.measured_qubits);
    const auto ens = compile_ensemble(c, cfg.n_rc, derive_seed(*cfg.seed, ud, kTwirl));
    for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
      const OverrotationNoise noise = overrot_noise(cfg, cfg.grid[g]);
      const auto [b, r] = at_point(cfg.kind, cfg.grid[g], [&] {
        const SimResult sb = run_overrotation(c, noise.rotation, noise.decoherence);
        const double tb = tvd(ideal, maybe_sample(sb.distribution, cfg.shots, derive_seed(derive_seed(*cfg.seed, ud, kShots), 0)));
        Distribution acc = Distribution::zeros(ideal.bits());
        for (int k = 0; k < cfg.n_rc; ++k) {
          const auto& mem = ens.members[static_cast<std::size_t>(k)];
          const SimResult sr = run_overrotation(mem.circuit, noise.rotation, noise.decoherence, mem.final_frame);
          const Distribution dk = maybe_sample(sr.distribution, cfg.shots,
                                               derive_seed(derive_seed(*cfg.seed, ud, kShots), static_cast<std::uint64_t>(k + 1)));
          for (std::size_t o = 0; o < acc.size(); ++o) acc[o] += dk[o] / cfg.n_rc;
        }
        return std::pair{tb, tvd(ideal, acc)};
      });
      bare[g].push_back(b);
      rc[g].push_back(r);
      gap[g].push_back(b - r);
    }
  }
  ResultTable t;
  t.kind = cfg.kind;
  for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
    t.add(cfg.grid[g], "tvd_bare", bare[g]);
    t.add(cfg.grid[g], "tvd_rc", rc[g]);
    t.add(cfg.grid[g], "tvd_gap", gap[g]);
  }
  return t;
}

inline ResultTable run_rdd(const ExperimentConfig& cfg) {
  LatticeModel lm;
  lm.n_sys = cfg.qubits;
  lm.j_mean = cfg.j_mean;
  lm.j_variance = cfg.j_variance;
  at_point(cfg.kind, cfg.grid.front(), [&] { lm.validate(); return 0; });
  std::vector<std::vector<double>> r(cfg.grid.size());
  for (int d = 0; d < cfg.draws; ++d) {
    const auto ud = static_cast<std::uint64_t>(d);
    Rng jrng(derive_seed(*cfg.seed, ud, kCoupling));
    const auto j = lm.sample_couplings(jrng);
    for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
      const int rounds = static_cast<int>(std::lround(cfg.total_time / cfg.grid[g]));
      Rng prng(derive_seed(*cfg.seed, ud, kPulses));
      r[g].push_back(at_point(cfg.kind, cfg.grid[g], [&] { return rdd_run(lm, j, rounds, cfg.grid[g], prng); }));
    }
  }
  ResultTable t;
  t.kind = cfg.kind;
  for (std::size_t g = 0; g < cfg.grid.size(); ++g) t.add(cfg.grid[g], "r_rdd", r[g]);
  return t;
}

}  // namespace detail

/// Evaluates the sweep. Draw d uses RNG substreams derived from (seed, d), so
/// results do not depend on evaluation order.
inline ResultTable run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  switch (cfg.kind) {
    case ExperimentKind::Fig2NonMarkov: return detail::run_fig2(cfg);
    case ExperimentKind::Fig3NrcSweep: return detail::run_fig3(cfg);
    case ExperimentKind::Fig4RatioSweep: return detail::run_fig4(cfg);
    case ExperimentKind::RddCompare: return detail::run_rdd(cfg);
  }
  throw ConfigError("config: unknown kind");
}

inline nlohmann::ordered_json manifest(const ExperimentConfig& cfg, const ResultTable& t) {
  nlohmann::ordered_json j;
  j["schema_version"] = kResultSchemaVersion;
  j["columns"] = {"point", "statistic", "mean", "stderr", "count"};
  j["statistics"] = t.statistics();
  j["rows"] = t.rows.size();
  j["config"] = cfg.to_json();
  return j;
}

struct WrittenPaths {
  std::filesystem::path csv, manifest;
};

/// Writes <output>/<name>.csv and <output>/<name>.manifest.json.
inline WrittenPaths write_results(const ExperimentConfig& cfg, const ResultTable& t) {
  namespace fs = std::filesystem;
  const fs::path dir(cfg.output);
  fs::create_directories(dir);
  WrittenPaths p{dir / (cfg.label() + ".csv"), dir / (cfg.label() + ".manifest.json")};
  std::ofstream csv(p.csv, std::ios::binary);
  csv << t.to_csv();
  std::ofstream man(p.manifest, std::ios::binary);
  man << manifest(cfg, t).dump(2) << "\n";
  if (!csv || !man) throw std::runtime_error("cannot write results under " + dir.string());
  return p;
}

}  // namespace twirlc
