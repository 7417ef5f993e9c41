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

// Domain types for non-interacting junctions attached to finite, relaxed
// reservoirs. Units: hbar = e = k_B = 1. Energies and frequencies are in
// units of the lead hopping; currents are in e * energy / hbar.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dlvn/errors.hpp"

namespace dlvn {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr double kPi = 3.14159265358979323846;

namespace units {
inline constexpr double hbar = 1.0;
inline constexpr double charge = 1.0;
inline constexpr double boltzmann = 1.0;
}  // namespace units

/// Single-particle Hamiltonian of the junction. Hermiticity is checked
/// exactly; use `symmetrized` to accept a matrix with roundoff asymmetry.
class SystemHamiltonian {
 public:
  explicit SystemHamiltonian(Matrix matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
      throw ModelError("system Hamiltonian must be a non-empty square matrix");
    }
    for (Index i = 0; i < matrix_.rows(); ++i) {
      for (Index j = i; j < matrix_.cols(); ++j) {
        if (!std::isfinite(matrix_(i, j).real()) || !std::isfinite(matrix_(i, j).imag())) {
          throw ModelError("system Hamiltonian has a non-finite entry");
        }
        if (matrix_(i, j) != std::conj(matrix_(j, i))) {
          throw ModelError("system Hamiltonian is not Hermitian at (" + std::to_string(i) + "," +
                           std::to_string(j) + ")");
        }
      }
    }
  }

  static SystemHamiltonian symmetrized(const Matrix& m) {
    if (m.rows() != m.cols()) throw ModelError("system Hamiltonian must be square");
    Matrix h = 0.5 * (m + m.adjoint());
    for (Index i = 0; i < h.rows(); ++i) h(i, i) = h(i, i).real();
    return SystemHamiltonian(std::move(h));
  }

  Index dim() const { return matrix_.rows(); }
  const Matrix& matrix() const { return matrix_; }

  friend bool operator==(const SystemHamiltonian& a, const SystemHamiltonian& b) {
    return a.matrix_.rows() == b.matrix_.rows() && a.matrix_ == b.matrix_;
  }

 private:
  Matrix matrix_;
};

/// One relaxed reservoir eigenmode. `coupling(i)` is the hopping between
/// system site i and this mode.
struct ReservoirMode {
  double omega = 0.0;
  double gamma = 0.0;
  Vector coupling;

  friend bool operator==(const ReservoirMode& a, const ReservoirMode& b) {
    return a.omega == b.omega && a.gamma == b.gamma && a.coupling.size() == b.coupling.size() &&
           a.coupling == b.coupling;
  }
};

enum class LeadLabel { L, R };

inline std::string_view to_string(LeadLabel label) { return label == LeadLabel::L ? "L" : "R"; }

class Lead {
 public:
  Lead(LeadLabel label, std::vector<ReservoirMode> modes) : label_(label), modes_(std::move(modes)) {
    if (modes_.empty()) throw ModelError("lead " + std::string(to_string(label_)) + " has no modes");
    const Index width = modes_.front().coupling.size();
    for (const auto& m : modes_) {
      if (!std::isfinite(m.omega) || !std::isfinite(m.gamma)) {
        throw ModelError("lead " + std::string(to_string(label_)) + " has a non-finite mode");
      }
      if (m.coupling.size() != width || width == 0) {
        throw ModelError("lead " + std::string(to_string(label_)) +
                         " has coupling vectors of inconsistent length");
      }
    }
  }

  LeadLabel label() const { return label_; }
  const std::vector<ReservoirMode>& modes() const { return modes_; }
  std::size_t size() const { return modes_.size(); }
  Index system_dim() const { return modes_.front().coupling.size(); }

  double max_gamma() const {
    double g = 0.0;
    for (const auto& m : modes_) g = std::max(g, m.gamma);
    return g;
  }

 private:
  LeadLabel label_;
  std::vector<ReservoirMode> modes_;
};

struct FermiParameters {
  double mu_L = 0.0;
  double mu_R = 0.0;
  double temperature = 0.0;

  double mu(LeadLabel side) const { return side == LeadLabel::L ? mu_L : mu_R; }

  void validate() const {
    if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
      throw DomainError("temperature must be finite and >= 0");
    }
    if (!std::isfinite(mu_L) || !std::isfinite(mu_R)) throw DomainError("chemical potentials must be finite");
  }

  FermiParameters swapped() const { return {mu_R, mu_L, temperature}; }
  friend bool operator==(const FermiParameters&, const FermiParameters&) = default;
};

/// Fermi-Dirac occupation. At T = 0 the step takes the value 1/2 at omega == mu.
inline double fermi(double omega, double mu, double temperature) {
  if (!(temperature >= 0.0)) throw DomainError("fermi: temperature must be >= 0");
  if (temperature == 0.0) {
    if (omega < mu) return 1.0;
    if (omega > mu) return 0.0;
    return 0.5;
  }
  const double x = (omega - mu) / temperature;
  // exp overflow gives 1/inf = 0, which is the correct limit.
  if (x < 0.0) {
    const double e = std::exp(x);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(-x);
  return e / (1.0 + e);
}

inline double fermi(double omega, const FermiParameters& fp, LeadLabel side) {
  return fermi(omega, fp.mu(side), fp.temperature);
}

class JunctionModel {
 public:
  JunctionModel(SystemHamiltonian system, Lead lead_L, Lead lead_R)
      : system_(std::move(system)), lead_L_(std::move(lead_L)), lead_R_(std::move(lead_R)) {
    if (lead_L_.label() != LeadLabel::L || lead_R_.label() != LeadLabel::R) {
      throw ModelError("junction expects leads labelled L and R in that order");
    }
    for (const Lead* lead : {&lead_L_, &lead_R_}) {
      if (lead->system_dim() != system_.dim()) {
        throw ModelError("lead " + std::string(to_string(lead->label())) + " coupling length " +
                         std::to_string(lead->system_dim()) + " does not match N_S = " +
                         std::to_string(system_.dim()));
      }
    }
    identical_ = !mismatch_reason().has_value();
  }

  const SystemHamiltonian& system() const { return system_; }
  const Lead& lead_L() const { return lead_L_; }
  const Lead& lead_R() const { return lead_R_; }
  const Lead& lead(LeadLabel side) const { return side == LeadLabel::L ? lead_L_ : lead_R_; }
  Index system_dim() const { return system_.dim(); }
  bool identical_reservoirs() const { return identical_; }

  /// First failing mode comparison between the two leads, if any.
  std::optional<std::string> mismatch_reason() const {
    if (lead_L_.size() != lead_R_.size()) {
      return "mode counts differ (" + std::to_string(lead_L_.size()) + " vs " +
             std::to_string(lead_R_.size()) + ")";
    }
    for (std::size_t k = 0; k < lead_L_.size(); ++k) {
      const auto& a = lead_L_.modes()[k];
      const auto& b = lead_R_.modes()[k];
      if (a.omega != b.omega) return "mode " + std::to_string(k) + ": omega differs";
      if (a.gamma != b.gamma) return "mode " + std::to_string(k) + ": gamma differs";
      if (a.coupling != b.coupling) return "mode " + std::to_string(k) + ": coupling differs";
    }
    return std::nullopt;
  }

  /// Throws UsageError unless the reservoirs are identical.
  void require_identical(std::string_view operation) const {
    if (auto why = mismatch_reason()) {
      throw UsageError("identical reservoirs required by " + std::string(operation) + " (" + *why + ")");
    }
  }

  double max_gamma() const { return std::max(lead_L_.max_gamma(), lead_R_.max_gamma()); }
  double min_gamma() const {
    double g = lead_L_.modes().front().gamma;
    for (const Lead* lead : {&lead_L_, &lead_R_})
      for (const auto& m : lead->modes()) g = std::min(g, m.gamma);
    return g;
  }

 private:
  SystemHamiltonian system_;
  Lead lead_L_;
  Lead lead_R_;
  bool identical_ = false;
};

enum class CurrentMethod {
  TraceIntegral,
  CompactIntegral,
  PoleSum,
  LandauerSemiInfinite,
  NonMarkovian,
  LargeGamma,
  SmallGamma,
  OracleSylvester,
  OracleTimeEvolution,
};

inline constexpr CurrentMethod kAllMethods[] = {
    CurrentMethod::TraceIntegral, CurrentMethod::CompactIntegral,      CurrentMethod::PoleSum,
    CurrentMethod::LandauerSemiInfinite, CurrentMethod::NonMarkovian,  CurrentMethod::LargeGamma,
    CurrentMethod::SmallGamma,    CurrentMethod::OracleSylvester,      CurrentMethod::OracleTimeEvolution,
};

inline std::string_view to_string(CurrentMethod m) {
  switch (m) {
    case CurrentMethod::TraceIntegral: return "trace_integral";
    case CurrentMethod::CompactIntegral: return "compact_integral";
    case CurrentMethod::PoleSum: return "pole_sum";
    case CurrentMethod::LandauerSemiInfinite: return "landauer_semiinfinite";
    case CurrentMethod::NonMarkovian: return "nonmarkovian";
    case CurrentMethod::LargeGamma: return "large_gamma";
    case CurrentMethod::SmallGamma: return "small_gamma";
    case CurrentMethod::OracleSylvester: return "oracle_sylvester";
    case CurrentMethod::OracleTimeEvolution: return "oracle_time_evolution";
  }
  return "unknown";
}

inline std::optional<CurrentMethod> method_from_string(std::string_view name) {
  for (auto m : kAllMethods)
    if (to_string(m) == name) return m;
  return std::nullopt;
}

/// A steady-state current with its provenance. `diagnostics` always holds
/// "error_estimate"; other keys depend on the method.
struct CurrentResult {
  double value = 0.0;
  CurrentMethod method = CurrentMethod::TraceIntegral;
  std::map<std::string, double> diagnostics{{"error_estimate", 0.0}};

  CurrentResult() = default;
  CurrentResult(double v, CurrentMethod m, std::map<std::string, double> diag = {})
      : value(v), method(m), diagnostics(std::move(diag)) {
    diagnostics.try_emplace("error_estimate", 0.0);
  }

  double error_estimate() const { return diagnostics.at("error_estimate"); }
  std::optional<double> diagnostic(const std::string& key) const {
    auto it = diagnostics.find(key);
    if (it == diagnostics.end()) return std::nullopt;
    return it->second;
  }
};

// ---------------------------------------------------------------------------
// Builders

inline JunctionModel build_single_site_junction(double eps0, Lead lead_L, Lead lead_R) {
  for (const Lead* lead : {&lead_L, &lead_R}) {
    if (lead->system_dim() != 1) throw ModelError("single-site junction needs coupling vectors of length 1");
  }
  Matrix h(1, 1);
  h(0, 0) = eps0;
  return JunctionModel(SystemHamiltonian(std::move(h)), std::move(lead_L), std::move(lead_R));
}

/// Site 0 carries both leads; site 1 is a side-coupled level reached only via h12.
inline JunctionModel build_two_site_interference_junction(double eps1, double eps2, Complex h12, Lead lead_L,
                                                          Lead lead_R) {
  for (const Lead* lead : {&lead_L, &lead_R}) {
    if (lead->system_dim() != 2) throw ModelError("two-site junction needs coupling vectors of length 2");
    for (const auto& m : lead->modes()) {
      if (m.coupling(1) != Complex(0.0)) {
        throw ModelError("two-site interference geometry: lead " + std::string(to_string(lead->label())) +
                         " couples to the side site");
      }
    }
  }
  Matrix h(2, 2);
  h << eps1, h12, std::conj(h12), eps2;
  return JunctionModel(SystemHamiltonian(std::move(h)), std::move(lead_L), std::move(lead_R));
}

struct UniformGamma {
  double gamma;
  friend bool operator==(const UniformGamma&, const UniformGamma&) = default;
};
/// gamma_k = factor * (local level spacing at omega_k).
struct SpacingProportionalGamma {
  double factor;
  friend bool operator==(const SpacingProportionalGamma&, const SpacingProportionalGamma&) = default;
};
using GammaPolicy = std::variant<UniformGamma, SpacingProportionalGamma>;

/// Eigenmodes of an open N-site tight-binding chain (hopping -t_hop) whose
/// end site couples to `attach_site` of the system with amplitude v0.
inline Lead discretize_lead_chain(int n_modes, double t_hop, Complex v0, const GammaPolicy& gamma_policy,
                                  LeadLabel label, Index system_dim = 1, Index attach_site = 0) {
  if (n_modes < 1) throw ModelError("lead chain needs N >= 1");
  if (!(t_hop > 0.0) || !std::isfinite(t_hop)) throw ModelError("lead chain needs t_hop > 0");
  if (system_dim < 1 || attach_site < 0 || attach_site >= system_dim) {
    throw ModelError("lead attachment site outside the system");
  }
  if (const auto* u = std::get_if<UniformGamma>(&gamma_policy); u && !(u->gamma > 0.0)) {
    throw ModelError("lead relaxation gamma must be > 0");
  }
  if (const auto* s = std::get_if<SpacingProportionalGamma>(&gamma_policy); s && !(s->factor > 0.0)) {
    throw ModelError("lead relaxation spacing factor must be > 0");
  }
  const double step = kPi / (n_modes + 1);
  const double norm = std::sqrt(2.0 / (n_modes + 1));
  std::vector<ReservoirMode> modes;
  modes.reserve(static_cast<std::size_t>(n_modes));
  for (int k = 1; k <= n_modes; ++k) {
    const double theta = k * step;
    ReservoirMode m;
    m.omega = -2.0 * t_hop * std::cos(theta);
    if (const auto* u = std::get_if<UniformGamma>(&gamma_policy)) {
      m.gamma = u->gamma;
    } else {
      const double spacing = 2.0 * t_hop * std::sin(theta) * step;
      m.gamma = std::get<SpacingProportionalGamma>(gamma_policy).factor * spacing;
    }
    m.coupling = Vector::Zero(system_dim);
    m.coupling(attach_site) = v0 * norm * std::sin(theta);
    modes.push_back(std::move(m));
  }
  return Lead(label, std::move(modes));
}

}  // namespace dlvn
