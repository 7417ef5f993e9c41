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

#pragma once

// Subcommands of the dlvn tool. Each returns the process exit code:
// 0 success, 1 usage or parse error, 2 numerical failure, 3 failed validation.
// Errors go to `err` as "ERROR <category>: message".

#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dlvn/analysis.hpp"
#include "dlvn/cli/config.hpp"
#include "dlvn/cli/csv.hpp"
#include "dlvn/random.hpp"

namespace dlvn::cli {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitNumerical = 2, kExitValidation = 3 };

struct CommandOptions {
  std::string config_path;
  std::string out_path;
  int jobs = 1;
  /// Oracle correlation matrix destination; empty disables the dump.
  std::string dump_correlations;
  std::uint64_t seed = 1;
  std::optional<double> rel_tol;
};

inline bool is_numerical_category(std::string_view category) {
  return category == "accuracy" || category == "computation" || category == "step-size" ||
         category == "consistency" || category == "internal";
}

inline int exit_code_for(std::string_view category) {
  return is_numerical_category(category) ? kExitNumerical : kExitUsage;
}

inline void report_error(std::ostream& err, std::string_view category, std::string_view message) {
  err << "ERROR " << category << ": " << message << '\n';
}

/// Reads and parses the config file, then applies a --rel-tol override.
inline RunConfig load_config(const CommandOptions& options) {
  if (options.config_path.empty()) throw UsageError("--config is required");
  std::ifstream in(options.config_path);
  if (!in) throw UsageError("cannot read config file " + options.config_path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  RunConfig config = parse_config(buffer.str());
  if (options.rel_tol) {
    if (!(*options.rel_tol > 0.0) || !std::isfinite(*options.rel_tol)) throw UsageError("--rel-tol must be > 0");
    config.quadrature.rel_tol = *options.rel_tol;
  }
  if (options.jobs < 1) throw UsageError("--jobs must be >= 1");
  return config;
}

namespace detail {

/// Explicit methods, or all applicable ones. Rejects methods whose
/// preconditions the junction does not meet.
inline std::vector<CurrentMethod> resolve_methods(const RunConfig& config, const JunctionTemplate& t,
                                                  const JunctionModel& j) {
  if (config.all_methods) return applicable_methods(t, j);
  for (auto m : config.methods) {
    switch (m) {
      case CurrentMethod::CompactIntegral:
      case CurrentMethod::PoleSum:
      case CurrentMethod::LargeGamma:
      case CurrentMethod::SmallGamma:
        j.require_identical(to_string(m));
        break;
      case CurrentMethod::LandauerSemiInfinite:
        t.semi_infinite();
        break;
      default:
        break;
    }
  }
  return config.methods;
}

inline int report_cells(std::ostream& err, const std::vector<const SweepCell*>& cells, std::string_view where) {
  int code = kExitOk;
  for (const SweepCell* c : cells) {
    if (!c->failed()) continue;
    report_error(err, c->error_category, std::string(where) + std::string(to_string(c->method)) + ": " + c->error);
    code = std::max(code, static_cast<int>(kExitNumerical));
  }
  return code;
}

inline void dump_correlations(const std::string& path, const JunctionModel& j, const FermiParameters& fp) {
  std::ofstream file(path);
  if (!file) throw UsageError("cannot write " + path);
  const auto model = assemble_full_space(j, fp);
  write_correlations_csv(file, solve_steady_state(model));
}

}  // namespace detail

inline int cmd_current(const RunConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err) {
  if (config.mode != RunMode::SinglePoint) throw UsageError("current needs a single-point config (run.method)");
  const JunctionTemplate t = config.junction_template();
  const JunctionModel j = t.build();
  const auto methods = detail::resolve_methods(config, t, j);
  write_comment_block(out, echo_config(config));
  out << kCsvHeader << '\n';
  std::vector<SweepCell> cells;
  for (auto m : methods) {
    cells.push_back(dlvn::detail::evaluate_cell(m, t, config.fermi, config.quadrature));
    out << csv_row("", std::nullopt, cells.back()) << '\n';
  }
  out.flush();
  std::vector<const SweepCell*> ptrs;
  for (const auto& c : cells) ptrs.push_back(&c);
  int code = detail::report_cells(err, ptrs, "");
  if (!options.dump_correlations.empty()) detail::dump_correlations(options.dump_correlations, j, config.fermi);
  return code;
}

inline SweepSpec sweep_spec_from(const RunConfig& config) {
  if (config.mode != RunMode::Sweep) throw UsageError("sweep needs a sweep config (run.sweep)");
  SweepSpec spec;
  spec.parameter = config.sweep_parameter;
  spec.values = config.sweep_values;
  spec.junction = config.junction_template();
  spec.fermi = config.fermi;
  spec.quadrature = config.quadrature;
  spec.methods = detail::resolve_methods(config, spec.junction, spec.junction.build());
  spec.validate();
  return spec;
}

inline int cmd_sweep(const RunConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err) {
  const SweepSpec spec = sweep_spec_from(config);
  write_comment_block(out, echo_config(config));
  out << kCsvHeader << '\n';
  out.flush();
  int code = kExitOk;
  const std::string name(to_string(spec.parameter));
  run_sweep(spec, options.jobs, [&](const SweepRow& row) {
    std::vector<const SweepCell*> ptrs;
    for (const auto& c : row.cells) {
      out << csv_row(name, row.parameter_value, c) << '\n';
      ptrs.push_back(&c);
    }
    out.flush();
    code = std::max(code, detail::report_cells(err, ptrs, name + "=" + format_double(row.parameter_value) + " "));
  });
  return code;
}

inline int cmd_converge(const RunConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err) {
  if (config.mode != RunMode::Convergence) throw UsageError("converge needs a convergence config (run.converge_N)");
  const JunctionTemplate t = config.junction_template();
  const auto rows =
      landauer_convergence_report(t, config.fermi, config.converge_n, config.gamma_rule, config.quadrature, options.jobs);
  write_comment_block(out, echo_config(config));
  out << kCsvHeader << kConvergenceExtraHeader << '\n';
  int code = kExitOk;
  if (!rows.empty() && !rows.front().landauer) {
    report_error(err, "accuracy", "landauer reference failed: " + rows.front().landauer_error);
    code = kExitNumerical;
  }
  for (const auto& r : rows) {
    const std::string extra = ',' + format_double(r.gamma) + ',' + format_double(r.spacing_over_gamma) + ',' +
                              format_optional(r.landauer) + ',';
    out << csv_row("N", r.n_modes, r.pole_sum) << extra << format_optional(r.pole_sum_abs_err) << ','
        << format_optional(r.pole_sum_rel_err) << '\n';
    out << csv_row("N", r.n_modes, r.nonmarkovian) << extra << format_optional(r.nonmarkovian_abs_err) << ','
        << format_optional(r.nonmarkovian_rel_err) << '\n';
    code = std::max(code, detail::report_cells(err, {&r.pole_sum, &r.nonmarkovian}, "N=" + std::to_string(r.n_modes) + " "));
  }
  return code;
}

// ---------------------------------------------------------------------------
// validate

inline constexpr int kValidationGridPoints = 32;
inline constexpr double kIdentityTolerance = 1e-10;

struct CheckResult {
  std::string name;
  enum class Status { Pass, Fail, Skipped } status = Status::Pass;
  std::string detail;
};

inline std::string_view to_string(CheckResult::Status s) {
  switch (s) {
    case CheckResult::Status::Pass:
      return "PASS";
    case CheckResult::Status::Fail:
      return "FAIL";
    case CheckResult::Status::Skipped:
      return "skipped (precondition)";
  }
  return "?";
}

/// 32 evenly spaced frequencies covering every mode plus one unit of margin.
inline std::vector<double> validation_grid(const JunctionModel& j) {
  double lo = -1.0, hi = 1.0;
  for (const Lead* lead : {&j.lead_L(), &j.lead_R()}) {
    for (const auto& m : lead->modes()) {
      lo = std::min(lo, m.omega - 1.0);
      hi = std::max(hi, m.omega + 1.0);
    }
  }
  std::vector<double> grid(kValidationGridPoints);
  for (int i = 0; i < kValidationGridPoints; ++i) grid[i] = lo + (hi - lo) * (i + 0.5) / kValidationGridPoints;
  return grid;
}

namespace detail {

inline std::string sci(double x) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(3) << x;
  return s.str();
}

template <class F>
CheckResult run_check(std::string name, F&& body) {
  CheckResult r;
  r.name = std::move(name);
  try {
    body(r);
  } catch (const Error& e) {
    r.status = CheckResult::Status::Fail;
    r.detail = std::string(e.category()) + ": " + e.what();
  }
  return r;
}

inline bool oracle_agrees(double trace, double oracle) {
  return std::abs(trace - oracle) <= std::max(1e-6 * std::abs(oracle), 1e-10);
}

}  // namespace detail

inline std::vector<CheckResult> validation_checks(const RunConfig& config, std::uint64_t seed) {
  using Status = CheckResult::Status;
  const JunctionModel j = config.junction_template().build();
  Matrix h = j.system().matrix();
  if (config.debug_corrupt_hermiticity) h(0, h.cols() - 1) += Complex(1e-3, 1e-3);
  const auto grid = validation_grid(j);
  std::vector<CheckResult> checks;

  checks.push_back(detail::run_check("hermiticity", [&](CheckResult& r) {
    const double res = max_abs(h - h.adjoint());
    r.detail = "max |H - H^dagger| = " + detail::sci(res);
    if (!(res <= 1e-12)) r.status = Status::Fail;
  }));

  checks.push_back(detail::run_check("resolvent_identity", [&](CheckResult& r) {
    double worst = 0.0;
    for (double w : grid) worst = std::max(worst, verify_resolvent_identity(w, h, j.lead_L(), j.lead_R()));
    r.detail = "max residual " + detail::sci(worst) + " on " + std::to_string(grid.size()) + " points";
    if (!(worst < kIdentityTolerance)) r.status = Status::Fail;
  }));

  checks.push_back(detail::run_check("identical_reservoir_identity", [&](CheckResult& r) {
    if (const auto why = j.mismatch_reason()) {
      r.status = Status::Skipped;
      r.detail = *why;
      return;
    }
    double worst = 0.0;
    for (double w : grid) worst = std::max(worst, verify_identical_reservoir_identity(w, j));
    r.detail = "max residual " + detail::sci(worst) + " on " + std::to_string(grid.size()) + " points";
    if (!(worst < kIdentityTolerance)) r.status = Status::Fail;
  }));

  checks.push_back(detail::run_check("oracle_vs_trace_integral", [&](CheckResult& r) {
    const double trace = current_trace_integral(j, config.fermi, config.quadrature).value;
    const double oracle = oracle_current(j, config.fermi).value;
    r.detail = "trace " + format_double(trace) + " oracle " + format_double(oracle);
    if (!detail::oracle_agrees(trace, oracle)) r.status = Status::Fail;
  }));

  if (config.random_junctions > 0) {
    checks.push_back(detail::run_check("random_junctions", [&](CheckResult& r) {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> omega(-3.0, 3.0);
      int failures = 0;
      double worst_identity = 0.0;
      for (int i = 0; i < config.random_junctions; ++i) {
        const JunctionModel rj = random_junction(rng, i % 2 == 1);
        const FermiParameters fp{0.3, -0.3, 0.05};
        worst_identity = std::max(worst_identity, verify_resolvent_identity(omega(rng), rj));
        if (!detail::oracle_agrees(current_trace_integral(rj, fp, config.quadrature).value, oracle_current(rj, fp).value))
          ++failures;
      }
      r.detail = "seed " + std::to_string(seed) + ", " + std::to_string(config.random_junctions) +
                 " junctions, oracle mismatches " + std::to_string(failures) + ", max identity residual " +
                 detail::sci(worst_identity);
      if (failures > 0 || !(worst_identity < kIdentityTolerance)) r.status = Status::Fail;
    }));
  }
  return checks;
}

inline int cmd_validate(const RunConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err) {
  const auto checks = validation_checks(config, options.seed);
  out << "check,status,detail\n";
  int code = kExitOk;
  for (const auto& c : checks) {
    out << c.name << ',' << to_string(c.status) << ',' << csv_field(c.detail) << '\n';
    if (c.status == CheckResult::Status::Fail) {
      report_error(err, "validation", "check " + c.name + " failed: " + c.detail);
      code = kExitValidation;
    }
  }
  return code;
}

/// Loads the config, opens the output and runs one subcommand; every error
/// is reported and mapped to an exit code.
inline int run_command(RunMode command, const CommandOptions& options, std::ostream& stdout_stream,
                       std::ostream& err) {
  try {
    const RunConfig config = load_config(options);
    const std::string path = !options.out_path.empty() ? options.out_path : config.output;
    std::ofstream file;
    if (!path.empty()) {
      file.open(path);
      if (!file) throw UsageError("cannot write " + path);
    }
    std::ostream& out = path.empty() ? stdout_stream : file;
    switch (command) {
      case RunMode::SinglePoint:
        return cmd_current(config, options, out, err);
      case RunMode::Sweep:
        return cmd_sweep(config, options, out, err);
      case RunMode::Convergence:
        return cmd_converge(config, options, out, err);
      case RunMode::Validate:
        return cmd_validate(config, options, out, err);
    }
    throw UsageError("unknown command");
  } catch (const Error& e) {
    report_error(err, e.category(), e.what());
    return exit_code_for(e.category());
  } catch (const std::exception& e) {
    report_error(err, "internal", e.what());
    return kExitNumerical;
  }
}

}  // namespace dlvn::cli
