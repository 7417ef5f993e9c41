// Copyright 2026 The dlvn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// dlvn: steady-state currents of junctions between relaxed finite reservoirs.

#include <iostream>

#include "CLI11.hpp"
#include "dlvn/cli/commands.hpp"

namespace {

constexpr const char* kConfigHelp = R"(Config file keys (INI, unknown keys are errors):
  [system]     builder = single_site | two_site | raw
               single_site: eps0    two_site: eps1, eps2, h12, h12_im (0)
               raw: one 'row = re im re im ...' line per Hamiltonian row
  [lead_L]     chain builders: N, t_hop, v0, v0_im (0), gamma | gamma_spacing
  [lead_R]     raw builder: one 'mode = omega gamma v1_re v1_im ...' line per mode
  [fermi]      mu_L, mu_R, T
  [quadrature] rel_tol (RJ_DEFAULT_TOL, then 1e-8), abs_tol (1e-12),
               window_pad (40), max_panels (20000), split_at_poles (true)
  [run]        exactly one of:
                 method = all | name[,name...]
                 sweep = gamma | N | bias, sweep_values, sweep_methods
                 converge_N = n1,n2,..., gamma_rule = inverse_n | constant | spacing, gamma_c (8)
                 validate = true
               optional: random_junctions (4), output, debug_corrupt_hermiticity (false)
Methods: trace_integral compact_integral pole_sum landauer_semi_infinite nonmarkovian
         large_gamma small_gamma oracle_sylvester oracle_time_evolution
rel_tol precedence: --rel-tol > [quadrature] rel_tol > RJ_DEFAULT_TOL > 1e-8.
Exit codes: 0 ok, 1 usage/parse, 2 numerical failure, 3 validation failure.
Restriction: the lesser-function error bound is defined for T > 0 only.)";

}  // namespace

int main(int argc, char** argv) {
  using dlvn::cli::RunMode;
  CLI::App app{"Steady-state currents through junctions coupled to relaxed finite reservoirs", "dlvn"};
  app.footer(kConfigHelp);
  app.require_subcommand(1);

  dlvn::cli::CommandOptions options;
  double rel_tol = 0.0;
  struct Sub {
    RunMode mode;
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {RunMode::SinglePoint, "current", "Currents at one parameter point, one CSV row per method"},
      {RunMode::Sweep, "sweep", "Currents over a gamma, reservoir-size or bias sweep"},
      {RunMode::Convergence, "converge", "Pole-sum and non-Markovian currents against the Landauer limit"},
      {RunMode::Validate, "validate", "Identity and oracle checks; exit 3 if any fails"},
  };
  std::vector<std::pair<CLI::App*, RunMode>> commands;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--config", options.config_path, "Config file")->required();
    sub->add_option("--out", options.out_path, "Output path (default: run.output, then stdout)");
    sub->add_option("--jobs", options.jobs, "Worker threads for sweeps")->check(CLI::PositiveNumber);
    sub->add_option("--dump-correlations", options.dump_correlations, "Write the oracle correlation matrix CSV here");
    sub->add_option("--seed", options.seed, "Seed for randomized validation junctions");
    sub->add_option("--rel-tol", rel_tol, "Quadrature relative tolerance")->check(CLI::PositiveNumber);
    commands.emplace_back(sub, s.mode);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    dlvn::cli::report_error(std::cerr, "usage", e.what());
    return dlvn::cli::kExitUsage;
  }
  for (const auto& [sub, mode] : commands) {
    if (!sub->parsed()) continue;
    if (sub->count("--rel-tol")) options.rel_tol = rel_tol;
    return dlvn::cli::run_command(mode, options, std::cout, std::cerr);
  }
  return dlvn::cli::kExitUsage;
}
