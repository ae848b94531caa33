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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "twirlc/twirlc.hpp"

using namespace twirlc;
namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Circuit load_circuit(const std::string& path) {
  try {
    return parse_circuit(read_file(path));
  } catch (const ParseError& e) {
    throw ConfigError(path + ": " + e.what());
  } catch (const CircuitError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

struct CompileArgs {
  std::string circuit, out = ".";
  int n_rc = 1;
  std::uint64_t seed = 0;
};

int do_compile(const CompileArgs& a) {
  const Circuit bare = load_circuit(a.circuit);
  const auto ens = compile_ensemble(bare, a.n_rc, a.seed);
  fs::create_directories(a.out);
  const std::string stem = fs::path(a.circuit).stem().string();
  nlohmann::ordered_json frames;
  for (int k = 0; k < ens.size(); ++k) {
    const auto& m = ens.members[static_cast<std::size_t>(k)];
    const fs::path p = fs::path(a.out) / (stem + ".rc" + std::to_string(k) + ".circ");
    std::ofstream(p, std::ios::binary) << serialize(m.circuit);
    frames[std::to_string(k)] = m.final_frame.str();
    std::cout << p.string() << "\n";
  }
  const fs::path side = fs::path(a.out) / (stem + ".frames.json");
  std::ofstream(side, std::ios::binary) << frames.dump(2) << "\n";
  std::cout << side.string() << "\n";
  return 0;
}

struct SimulateArgs {
  std::string model = "overrot", circuit, out;
  int n_rc = 1, draws = 1, shots = 0;
  std::uint64_t seed = 0;
  OverrotationModel rot{0.01, 0.05};
  DecoherenceModel decoh;
  LatticeModel lattice;
};

int do_simulate(SimulateArgs a) {
  const Circuit bare = load_circuit(a.circuit);
  if (a.n_rc < 0 || a.draws < 1 || a.shots < 0) throw ConfigError("simulate: need n_rc >= 0, draws >= 1, shots >= 0");
  NoiseModel model;
  if (a.model == "lattice") {
    a.lattice.n_sys = bare.n;
    model = a.lattice;
  } else if (a.model == "overrot" || a.model == "decoh") {
    OverrotationNoise o{a.rot, std::nullopt};
    if (a.model == "decoh") {
      a.decoh.validate();
      o.decoherence = a.decoh;
    }
    model = o;
  } else {
    throw ConfigError("simulate: unknown model '" + a.model + "'");
  }
  const Distribution ideal =
      detail::measured_distribution(kernels::probabilities(ideal_state(bare)), bare.n, bare.measured_qubits);

  std::ostringstream csv;
  csv << "M,n_rc,draw,r,tvd,seed\n";
  for (int d = 0; d < a.draws; ++d) {
    const std::uint64_t seed = derive_seed(a.seed, static_cast<std::uint64_t>(d));
    Rng rng(derive_seed(seed, 1));
    Distribution dist;
    double r = 0;
    if (a.n_rc == 0) {
      SimResult s;
      if (const auto* o = std::get_if<OverrotationNoise>(&model))
        s = run_overrotation(bare, o->rotation, o->decoherence);
      else
        s = run_lattice(bare, std::get<LatticeModel>(model), rng);
      dist = s.distribution;
      r = s.error_rate;
    } else {
      const CompiledRun run = run_compiled(compile_ensemble(bare, a.n_rc, seed), model, rng);
      dist = run.average;
      r = run.mean_error_rate;
    }
    if (a.shots > 0) dist = Distribution::from_counts(sample_counts(dist, a.shots, rng), dist.bits());
    char buf[256];
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%.17g,%.17g,%llu\n", bare.depth(), a.n_rc, d, r, tvd(ideal, dist),
                  static_cast<unsigned long long>(seed));
    csv << buf;
  }
  if (a.out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(a.out, std::ios::binary);
    f << csv.str();
    if (!f) throw std::runtime_error("cannot write '" + a.out + "'");
  }
  return 0;
}

struct ParityArgs {
  std::string p;
  int rounds = 0;
  long oracle_samples = 0;
  std::uint64_t seed = 0;
};

double parse_p(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ConfigError("parity-bound: '" + s + "' is not a number");
  return v;
}

int do_parity(const ParityArgs& a) {
  ParityProfile prof;
  if (a.p.rfind("uniform:", 0) == 0) {
    if (a.rounds < 1) throw ConfigError("parity-bound: uniform profiles need --rounds >= 1");
    const double v = parse_p(a.p.substr(8));
    prof.p.assign(static_cast<std::size_t>(a.rounds), v);
  } else {
    std::stringstream ss(a.p);
    std::string item;
    while (std::getline(ss, item, ',')) prof.p.push_back(parse_p(item));
    if (a.rounds > 0 && a.rounds != static_cast<int>(prof.p.size()))
      throw ConfigError("parity-bound: --rounds does not match the length of --p");
  }
  try {
    prof.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  std::printf("rounds %zu\nbound %.12g\n", prof.p.size(), net_parity_bound(prof));
  if (a.oracle_samples > 0) {
    Rng rng(a.seed);
    const double q = net_parity_bound(prof);
    std::printf("oracle %.12g\nsigma %.3g\n", markov_oracle(prof, a.oracle_samples, rng),
                std::sqrt(q * (1 - q) / static_cast<double>(a.oracle_samples)));
  }
  return 0;
}

int do_run(const std::string& path) {
  const ExperimentConfig cfg = parse_config(read_file(path));
  const auto paths = write_results(cfg, run_experiment(cfg));
  std::cout << paths.csv.string() << "\n" << paths.manifest.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twirlc: randomized compiling toolkit"};
  app.require_subcommand(1);

  CompileArgs ca;
  auto* compile = app.add_subcommand("compile", "Randomly compile a circuit file");
  compile->add_option("circuit", ca.circuit, "Circuit file")->required();
  compile->add_option("--n-rc", ca.n_rc, "Number of compilations")->check(CLI::PositiveNumber);
  compile->add_option("--seed", ca.seed, "Master seed");
  compile->add_option("-o,--out", ca.out, "Output directory");

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Simulate a circuit under a noise model");
  simulate->add_option("--model", sa.model, "overrot, decoh or lattice")
      ->check(CLI::IsMember({"overrot", "decoh", "lattice"}));
  simulate->add_option("--circuit", sa.circuit, "Circuit file")->required();
  simulate->add_option("--n-rc", sa.n_rc, "Compilations per draw (0 runs the bare circuit)");
  simulate->add_option("--draws", sa.draws, "Independent draws");
  simulate->add_option("--shots", sa.shots, "Shots per distribution (0 = exact)");
  simulate->add_option("--seed", sa.seed, "Master seed");
  simulate->add_option("--eps-easy", sa.rot.eps_easy, "Easy-gate overrotation");
  simulate->add_option("--eps-hard", sa.rot.eps_hard, "Hard-gate overrotation");
  simulate->add_option("--t1", sa.decoh.t1, "T1 in seconds");
  simulate->add_option("--t2", sa.decoh.t2, "T2 in seconds");
  simulate->add_option("--t-single", sa.decoh.t_single, "Easy-cycle duration in seconds");
  simulate->add_option("--t-double", sa.decoh.t_double, "Hard-cycle duration in seconds");
  simulate->add_option("--j-mean", sa.lattice.j_mean, "Coupling mean");
  simulate->add_option("--j-variance", sa.lattice.j_variance, "Coupling variance");
  simulate->add_option("-o,--out", sa.out, "CSV output file (default stdout)");

  ParityArgs pa;
  auto* parity = app.add_subcommand("parity-bound", "Net parity guessing bound");
  parity->add_option("--p", pa.p, "Comma list of p_k, or uniform:<value>")->required();
  parity->add_option("--rounds", pa.rounds, "Number of rounds");
  parity->add_option("--oracle-samples", pa.oracle_samples, "Markov-chain samples");
  parity->add_option("--seed", pa.seed, "Oracle seed");

  std::string config;
  auto* run = app.add_subcommand("run", "Run an experiment sweep from a config file");
  run->add_option("--config", config, "Config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }
  try {
    if (*compile) return do_compile(ca);
    if (*simulate) return do_simulate(sa);
    if (*parity) return do_parity(pa);
    if (*run) return do_run(config);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
