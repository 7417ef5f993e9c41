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

// Error bounds for the Markovian lesser function, parameter sweeps and
// convergence toward the semi-infinite Landauer current.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "dlvn/currents.hpp"
#include "dlvn/oracle.hpp"

namespace dlvn {

// ---------------------------------------------------------------------------
// Lesser-function error bound

/// (gamma / 4T) ln(T / gamma), stated for gamma <= T.
inline double gless_error_bound(double gamma, double temperature) {
  if (!(gamma > 0.0) || !(temperature > 0.0) || !std::isfinite(gamma) || !std::isfinite(temperature)) {
    throw DomainError("gless_error_bound: gamma and T must be > 0");
  }
  if (gamma > temperature) throw DomainError("gless_error_bound: gamma > T is outside the bound's regime");
  return gamma / (4.0 * temperature) * std::log(temperature / gamma);
}

/// int dw/2pi gamma |f(w_k) - f(w)| / ((w - w_k)^2 + gamma^2/4).
inline double gless_error_norm(const ReservoirMode& mode, double mu, double temperature,
                               const QuadratureConfig& config = {}) {
  if (!(temperature > 0.0)) throw DomainError("gless_error_norm: T must be > 0");
  require_positive_gamma(mode);
  const double fk = fermi(mode.omega, mu, temperature);
  auto integrand = [&](double omega) {
    return std::abs(fk - fermi(omega, mu, temperature)) * mode_lorentzian(omega, mode);
  };
  const Pole poles[] = {{mode.omega, mode.gamma}, {mu, temperature}};
  return integrate_omega(integrand, std::span<const Pole>(poles), config).value / kTwoPi;
}

// ---------------------------------------------------------------------------
// Junction templates

enum class JunctionBuilder { SingleSite, TwoSite, Raw };

struct ChainLeadSpec {
  int n_modes = 32;
  double t_hop = 1.0;
  Complex v0 = 0.2;
  GammaPolicy gamma = UniformGamma{0.05};
  friend bool operator==(const ChainLeadSpec&, const ChainLeadSpec&) = default;
};

/// Parameters from which a junction is rebuilt at each sweep point. Chain
/// builders attach both leads to site 0; Raw carries fixed mode lists.
struct JunctionTemplate {
  JunctionBuilder builder = JunctionBuilder::SingleSite;
  double eps0 = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
  Complex h12 = 0.5;
  ChainLeadSpec lead_L;
  ChainLeadSpec lead_R;
  std::optional<JunctionModel> raw;

  bool is_chain() const { return builder != JunctionBuilder::Raw; }

  SystemHamiltonian system() const {
    switch (builder) {
      case JunctionBuilder::SingleSite: {
        Matrix h(1, 1);
        h(0, 0) = eps0;
        return SystemHamiltonian(std::move(h));
      }
      case JunctionBuilder::TwoSite: {
        Matrix h(2, 2);
        h << eps1, h12, std::conj(h12), eps2;
        return SystemHamiltonian(std::move(h));
      }
      case JunctionBuilder::Raw:
        break;
    }
    if (!raw) throw UsageError("raw junction template has no model");
    return raw->system();
  }

  JunctionModel build() const {
    if (!is_chain()) {
      if (!raw) throw UsageError("raw junction template has no model");
      return *raw;
    }
    const Index n = builder == JunctionBuilder::SingleSite ? 1 : 2;
    Lead l = discretize_lead_chain(lead_L.n_modes, lead_L.t_hop, lead_L.v0, lead_L.gamma, LeadLabel::L, n, 0);
    Lead r = discretize_lead_chain(lead_R.n_modes, lead_R.t_hop, lead_R.v0, lead_R.gamma, LeadLabel::R, n, 0);
    if (builder == JunctionBuilder::SingleSite) return build_single_site_junction(eps0, std::move(l), std::move(r));
    return build_two_site_interference_junction(eps1, eps2, h12, std::move(l), std::move(r));
  }

  /// The N -> infinity, gamma -> 0 reference geometry; chain builders only.
  SemiInfiniteGeometry semi_infinite() const {
    if (!is_chain()) throw UsageError("landauer_semi_infinite needs a chain-lead junction");
    return {system(), {lead_L.t_hop, lead_L.v0, 0}, {lead_R.t_hop, lead_R.v0, 0}};
  }
};

/// Same template with every mode relaxation set to gamma.
inline JunctionTemplate with_uniform_gamma(JunctionTemplate t, double gamma) {
  if (t.is_chain()) {
    t.lead_L.gamma = t.lead_R.gamma = UniformGamma{gamma};
    return t;
  }
  if (!t.raw) throw UsageError("raw junction template has no model");
  auto relax = [gamma](const Lead& lead) {
    auto modes = lead.modes();
    for (auto& m : modes) m.gamma = gamma;
    return Lead(lead.label(), std::move(modes));
  };
  t.raw = JunctionModel(t.raw->system(), relax(t.raw->lead_L()), relax(t.raw->lead_R()));
  return t;
}

// ---------------------------------------------------------------------------
// Method dispatch

/// Methods that make sense for this junction: identical-reservoir formulas
/// need identical leads and the Landauer reference needs chain leads. The
/// time-evolution oracle is slow and never implied.
inline std::vector<CurrentMethod> applicable_methods(const JunctionTemplate& t, const JunctionModel& j) {
  std::vector<CurrentMethod> out;
  const bool identical = j.identical_reservoirs();
  for (auto m : kAllMethods) {
    switch (m) {
      case CurrentMethod::CompactIntegral:
      case CurrentMethod::PoleSum:
      case CurrentMethod::LargeGamma:
      case CurrentMethod::SmallGamma:
        if (identical) out.push_back(m);
        break;
      case CurrentMethod::LandauerSemiInfinite:
        if (t.is_chain()) out.push_back(m);
        break;
      case CurrentMethod::OracleTimeEvolution:
        break;
      default:
        out.push_back(m);
    }
  }
  return out;
}

inline CurrentResult compute_current(CurrentMethod method, const JunctionTemplate& t, const JunctionModel& j,
                                     const FermiParameters& fp, const QuadratureConfig& config) {
  switch (method) {
    case CurrentMethod::TraceIntegral:
      return current_trace_integral(j, fp, config);
    case CurrentMethod::CompactIntegral:
      return current_compact_integral(j, fp, config);
    case CurrentMethod::PoleSum:
      return current_pole_sum(j, fp);
    case CurrentMethod::LandauerSemiInfinite:
      return current_landauer_semiinfinite(t.semi_infinite(), fp, config);
    case CurrentMethod::NonMarkovian:
      return current_nonmarkovian(j, fp, config);
    case CurrentMethod::LargeGamma:
      return current_large_gamma(j, fp);
    case CurrentMethod::SmallGamma:
      return current_small_gamma(j, fp);
    case CurrentMethod::OracleSylvester:
      return oracle_current(j, fp);
    case CurrentMethod::OracleTimeEvolution:
      return oracle_time_evolution_current(j, fp);
  }
  throw UsageError("unknown current method");
}

/// |a - b| / max(|a|, |b|); 0 when both vanish.
inline double relative_deviation(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepParameter { Gamma, ReservoirSize, Bias };

inline std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::Gamma:
      return "gamma";
    case SweepParameter::ReservoirSize:
      return "N";
    case SweepParameter::Bias:
      return "bias";
  }
  return "?";
}

struct SweepSpec {
  SweepParameter parameter = SweepParameter::Gamma;
  std::vector<double> values;
  std::vector<CurrentMethod> methods;
  JunctionTemplate junction;
  /// Bias sweeps keep the mean of mu_L and mu_R and set mu_L - mu_R = value.
  FermiParameters fermi;
  QuadratureConfig quadrature;

  void validate() const {
    if (values.empty()) throw UsageError("sweep: values must be non-empty");
    if (methods.empty()) throw UsageError("sweep: at least one method required");
    for (double v : values)
      if (!std::isfinite(v)) throw UsageError("sweep: non-finite value");
    bool up = true, down = true;
    for (std::size_t i = 1; i < values.size(); ++i) {
      up = up && values[i] > values[i - 1];
      down = down && values[i] < values[i - 1];
    }
    if (values.size() > 1 && !up && !down) throw UsageError("sweep: values must be strictly monotone");
    if (parameter == SweepParameter::Gamma) {
      for (double v : values)
        if (!(v > 0.0)) throw UsageError("sweep: gamma values must be > 0");
    }
    if (parameter == SweepParameter::ReservoirSize) {
      if (!junction.is_chain()) throw UsageError("sweep: reservoir-size sweeps need chain leads");
      for (double v : values)
        if (!(v >= 1.0) || v != std::floor(v) || v > 1e6) throw UsageError("sweep: N values must be positive integers");
    }
    fermi.validate();
    quadrature.validate();
  }

  JunctionTemplate junction_at(double value) const {
    switch (parameter) {
      case SweepParameter::Gamma:
        return with_uniform_gamma(junction, value);
      case SweepParameter::ReservoirSize: {
        JunctionTemplate t = junction;
        t.lead_L.n_modes = t.lead_R.n_modes = static_cast<int>(value);
        return t;
      }
      case SweepParameter::Bias:
        break;
    }
    return junction;
  }

  FermiParameters fermi_at(double value) const {
    if (parameter != SweepParameter::Bias) return fermi;
    const double mid = 0.5 * (fermi.mu_L + fermi.mu_R);
    return {mid + 0.5 * value, mid - 0.5 * value, fermi.temperature};
  }
};

/// One method evaluated at one sweep point. A failure leaves `value` empty.
struct SweepCell {
  CurrentMethod method = CurrentMethod::TraceIntegral;
  std::optional<double> value;
  std::optional<double> error_estimate;
  std::optional<double> panels;
  std::optional<double> residual;
  std::string error;
  std::string error_category;

  bool failed() const { return !value.has_value(); }
};

struct PairDeviation {
  CurrentMethod a;
  CurrentMethod b;
  std::optional<double> value;
};

struct SweepRow {
  double parameter_value = 0.0;
  std::vector<SweepCell> cells;
  /// Every unordered pair of requested methods, in request order.
  std::vector<PairDeviation> deviations;
  /// Per cell, relative deviation from LandauerSemiInfinite when requested.
  std::vector<std::optional<double>> landauer_deviation;

  const SweepCell* cell(CurrentMethod m) const {
    for (const auto& c : cells)
      if (c.method == m) return &c;
    return nullptr;
  }
  std::optional<double> deviation(CurrentMethod a, CurrentMethod b) const {
    for (const auto& d : deviations)
      if ((d.a == a && d.b == b) || (d.a == b && d.b == a)) return d.value;
    return std::nullopt;
  }
  bool any_failed() const {
    return std::any_of(cells.begin(), cells.end(), [](const SweepCell& c) { return c.failed(); });
  }
};

namespace detail {

inline SweepCell failed_cell(CurrentMethod m, const std::exception& e) {
  SweepCell cell;
  cell.method = m;
  cell.error = e.what();
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    cell.error_category = err->category();
  } else {
    cell.error_category = "internal";
  }
  return cell;
}

inline SweepCell evaluate_cell(CurrentMethod m, const JunctionTemplate& t, const FermiParameters& fp,
                               const QuadratureConfig& config) {
  try {
    const JunctionModel j = t.build();
    const CurrentResult r = compute_current(m, t, j, fp, config);
    if (!std::isfinite(r.value)) throw ComputationError("non-finite current", r.value);
    SweepCell cell;
    cell.method = m;
    cell.value = r.value;
    cell.error_estimate = r.error_estimate();
    cell.panels = r.diagnostic("panels");
    cell.residual = r.diagnostic("residual");
    return cell;
  } catch (const std::exception& e) {
    return failed_cell(m, e);
  }
}

inline void fill_deviations(SweepRow& row) {
  const auto& cells = row.cells;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t k = i + 1; k < cells.size(); ++k) {
      PairDeviation d{cells[i].method, cells[k].method, std::nullopt};
      if (cells[i].value && cells[k].value) d.value = relative_deviation(*cells[i].value, *cells[k].value);
      row.deviations.push_back(d);
    }
  }
  const SweepCell* ref = row.cell(CurrentMethod::LandauerSemiInfinite);
  for (const auto& c : cells) {
    if (ref && ref->value && c.value) {
      row.landauer_deviation.push_back(relative_deviation(*c.value, *ref->value));
    } else {
      row.landauer_deviation.push_back(std::nullopt);
    }
  }
}

/// Runs task(i) for i in [0, count) on up to `jobs` threads.
inline void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& task) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) task(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// Evaluates every (value, method) cell on up to `jobs` threads. Rows are
/// handed to `on_row` in input order as soon as they and all earlier rows are
/// done; the returned rows are in the same order.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec, int jobs = 1,
                                       const std::function<void(const SweepRow&)>& on_row = {}) {
  spec.validate();
  const std::size_t n_rows = spec.values.size();
  const std::size_t n_methods = spec.methods.size();
  std::vector<SweepRow> rows(n_rows);
  std::vector<std::size_t> remaining(n_rows, n_methods);
  for (std::size_t r = 0; r < n_rows; ++r) {
    rows[r].parameter_value = spec.values[r];
    rows[r].cells.resize(n_methods);
  }
  std::mutex mutex;
  std::size_t emitted = 0;
  detail::parallel_for(n_rows * n_methods, jobs, [&](std::size_t task) {
    const std::size_t r = task / n_methods;
    const std::size_t m = task % n_methods;
    const double v = spec.values[r];
    SweepCell cell = detail::evaluate_cell(spec.methods[m], spec.junction_at(v), spec.fermi_at(v), spec.quadrature);
    std::lock_guard<std::mutex> lock(mutex);
    rows[r].cells[m] = std::move(cell);
    if (--remaining[r] == 0) detail::fill_deviations(rows[r]);
    while (emitted < n_rows && remaining[emitted] == 0) {
      if (on_row) on_row(rows[emitted]);
      ++emitted;
    }
  });
  return rows;
}

// ---------------------------------------------------------------------------
// Landauer convergence

struct ConstantGamma {
  double gamma;
  friend bool operator==(const ConstantGamma&, const ConstantGamma&) = default;
};
/// gamma = c / N.
struct InverseSizeGamma {
  double c;
  friend bool operator==(const InverseSizeGamma&, const InverseSizeGamma&) = default;
};
/// gamma_k = c * local level spacing.
struct SpacingGamma {
  double c;
  friend bool operator==(const SpacingGamma&, const SpacingGamma&) = default;
};
using GammaRule = std::variant<ConstantGamma, InverseSizeGamma, SpacingGamma>;

inline GammaPolicy gamma_policy_for(const GammaRule& rule, int n) {
  if (const auto* g = std::get_if<ConstantGamma>(&rule)) return UniformGamma{g->gamma};
  if (const auto* g = std::get_if<InverseSizeGamma>(&rule)) return UniformGamma{g->c / n};
  return SpacingProportionalGamma{std::get<SpacingGamma>(rule).c};
}

struct ConvergenceRow {
  int n_modes = 0;
  /// gamma at band centre.
  double gamma = 0.0;
  /// Band-centre mode spacing over gamma.
  double spacing_over_gamma = 0.0;
  std::optional<double> landauer;
  SweepCell pole_sum;
  SweepCell nonmarkovian;
  std::optional<double> pole_sum_abs_err, pole_sum_rel_err;
  std::optional<double> nonmarkovian_abs_err, nonmarkovian_rel_err;
  std::string landauer_error;
};

/// PoleSum and NonMarkovian currents against the semi-infinite Landauer
/// current for each N in `n_list`, with gamma chosen by `rule`.
inline std::vector<ConvergenceRow> landauer_convergence_report(const JunctionTemplate& geometry,
                                                               const FermiParameters& fp,
                                                               const std::vector<int>& n_list, const GammaRule& rule,
                                                               const QuadratureConfig& config = {}, int jobs = 1) {
  if (!geometry.is_chain()) throw UsageError("convergence: chain-lead junction required");
  if (n_list.empty()) throw UsageError("convergence: N list must be non-empty");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1) throw UsageError("convergence: N must be >= 1");
    if (i > 0 && n_list[i] <= n_list[i - 1]) throw UsageError("convergence: N list must be increasing");
  }
  std::visit(
      [](const auto& r) {
        using R = std::decay_t<decltype(r)>;
        double v;
        if constexpr (std::is_same_v<R, ConstantGamma>) v = r.gamma; else v = r.c;
        if (!(v > 0.0) || !std::isfinite(v)) throw UsageError("convergence: gamma rule must be positive");
      },
      rule);
  fp.validate();
  config.validate();

  std::optional<double> landauer;
  std::string landauer_error;
  try {
    landauer = current_landauer_semiinfinite(geometry.semi_infinite(), fp, config).value;
  } catch (const Error& e) {
    landauer_error = e.what();
  }

  std::vector<ConvergenceRow> rows(n_list.size());
  detail::parallel_for(2 * n_list.size(), jobs, [&](std::size_t task) {
    const std::size_t i = task / 2;
    JunctionTemplate t = geometry;
    t.lead_L.n_modes = t.lead_R.n_modes = n_list[i];
    t.lead_L.gamma = t.lead_R.gamma = gamma_policy_for(rule, n_list[i]);
    const CurrentMethod m = task % 2 == 0 ? CurrentMethod::PoleSum : CurrentMethod::NonMarkovian;
    SweepCell cell = detail::evaluate_cell(m, t, fp, config);
    ConvergenceRow& row = rows[i];
    (m == CurrentMethod::PoleSum ? row.pole_sum : row.nonmarkovian) = std::move(cell);
  });

  for (std::size_t i = 0; i < n_list.size(); ++i) {
    ConvergenceRow& row = rows[i];
    const int n = n_list[i];
    const double step = kPi / (n + 1);
    const double spacing = 2.0 * geometry.lead_L.t_hop * step;
    row.n_modes = n;
    if (const auto* g = std::get_if<ConstantGamma>(&rule)) row.gamma = g->gamma;
    else if (const auto* g = std::get_if<InverseSizeGamma>(&rule)) row.gamma = g->c / n;
    else row.gamma = std::get<SpacingGamma>(rule).c * spacing;
    row.spacing_over_gamma = spacing / row.gamma;
    row.landauer = landauer;
    row.landauer_error = landauer_error;
    if (landauer) {
      auto fill = [&](const SweepCell& c, std::optional<double>& abs_err, std::optional<double>& rel_err) {
        if (!c.value) return;
        abs_err = std::abs(*c.value - *landauer);
        if (*landauer != 0.0) rel_err = *abs_err / std::abs(*landauer);
      };
      fill(row.pole_sum, row.pole_sum_abs_err, row.pole_sum_rel_err);
      fill(row.nonmarkovian, row.nonmarkovian_abs_err, row.nonmarkovian_rel_err);
    }
  }
  return rows;
}

}  // namespace dlvn
