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

// Steady-state current formulas for junctions with relaxed reservoirs.
// Sign convention: positive current is particle flow L -> R.

#include <algorithm>
#include <cmath>
#include <vector>

#include "dlvn/model.hpp"
#include "dlvn/quadrature.hpp"
#include "dlvn/spectral.hpp"

namespace dlvn {

inline constexpr double kTwoPi = 2.0 * kPi;

/// Finite-temperature Fermi windows are cut this many T beyond each mu.
inline constexpr double kFermiTailCut = 40.0;

/// Every reservoir mode as a quadrature pole, deduplicated.
inline std::vector<Pole> junction_poles(const JunctionModel& junction) {
  std::vector<Pole> poles;
  for (const Lead* lead : {&junction.lead_L(), &junction.lead_R()})
    for (const auto& m : lead->modes()) poles.push_back({m.omega, m.gamma});
  std::sort(poles.begin(), poles.end(), [](const Pole& a, const Pole& b) {
    return a.center < b.center || (a.center == b.center && a.width < b.width);
  });
  poles.erase(std::unique(poles.begin(), poles.end(),
                          [](const Pole& a, const Pole& b) { return a.center == b.center && a.width == b.width; }),
              poles.end());
  return poles;
}

/// Markovian formulas need gamma_k > 0 and a width the real axis can resolve.
inline void require_markovian(const JunctionModel& junction) {
  require_positive_gamma(junction);
  const auto poles = junction_poles(junction);
  quad_detail::check_resolvable(poles);
}

inline CurrentResult from_integral(const Integral<double>& integral, CurrentMethod method) {
  return CurrentResult(integral.value / kTwoPi, method,
                       {{"error_estimate", integral.error_estimate / kTwoPi},
                        {"panels", static_cast<double>(integral.panels)}});
}

/// I = int dw/2pi tr[ G~^L G^a G^R G^r - G^L G^r G~^R G^a ]; valid for any pair of leads.
inline CurrentResult current_trace_integral(const JunctionModel& junction, const FermiParameters& fp,
                                            const QuadratureConfig& config = {}) {
  fp.validate();
  require_markovian(junction);
  const auto poles = junction_poles(junction);
  auto integrand = [&](double omega) {
    const SpectralSample s = spectral_sample(omega, junction, fp);
    const Complex forward = (s.gamma_L_weighted * s.g_adv * s.gamma_R * s.g_ret).trace();
    const Complex backward = (s.gamma_L * s.g_ret * s.gamma_R_weighted * s.g_adv).trace();
    return (forward - backward).real();
  };
  return from_integral(integrate_omega(integrand, poles, config), CurrentMethod::TraceIntegral);
}

/// I = (i/2) int dw/2pi tr[(G~^L - G~^R)(G^r - G^a)]; identical reservoirs only.
inline CurrentResult current_compact_integral(const JunctionModel& junction, const FermiParameters& fp,
                                              const QuadratureConfig& config = {}) {
  fp.validate();
  junction.require_identical("current_compact_integral");
  require_markovian(junction);
  const auto poles = junction_poles(junction);
  auto integrand = [&](double omega) {
    const SpectralSample s = spectral_sample(omega, junction, fp);
    const Complex tr = ((s.gamma_L_weighted - s.gamma_R_weighted) * (s.g_ret - s.g_adv)).trace();
    return (Complex(0.0, 0.5) * tr).real();
  };
  return from_integral(integrate_omega(integrand, poles, config), CurrentMethod::CompactIntegral);
}

/// Closed-form contour result for identical reservoirs:
/// I = -sum_{k in L} (f~_k^L - f~_k^R) Im[v_k^dagger G^r(w_k + i gamma_k/2) v_k].
inline CurrentResult current_pole_sum(const JunctionModel& junction, const FermiParameters& fp) {
  fp.validate();
  junction.require_identical("current_pole_sum");
  require_markovian(junction);
  const Matrix& h = junction.system().matrix();
  double current = 0.0;
  double max_condition = 0.0;
  for (const auto& mode : junction.lead_L().modes()) {
    const double df = fermi(mode.omega, fp.mu_L, fp.temperature) - fermi(mode.omega, fp.mu_R, fp.temperature);
    if (df == 0.0) continue;
    const Complex z(mode.omega, 0.5 * mode.gamma);
    const Matrix gr = green_ret(z, h, self_energy_ret(z, junction));
    const Complex q = mode.coupling.dot(gr * mode.coupling);  // v^dagger G v
    current -= df * q.imag();
    max_condition = std::max(max_condition, gr.cwiseAbs().maxCoeff());
  }
  return CurrentResult(current, CurrentMethod::PoleSum, {{"error_estimate", 0.0}, {"max_abs_green", max_condition}});
}

// ---------------------------------------------------------------------------
// Landauer reference with semi-infinite 1D leads

/// A semi-infinite tight-binding chain (hopping t_hop) attached by v0 to one system site.
struct ChainLeadGeometry {
  double t_hop = 1.0;
  Complex v0 = 0.0;
  Index attach_site = 0;
  friend bool operator==(const ChainLeadGeometry&, const ChainLeadGeometry&) = default;
};

struct SemiInfiniteGeometry {
  SystemHamiltonian system;
  ChainLeadGeometry lead_L;
  ChainLeadGeometry lead_R;
};

/// Retarded surface self-energy of a semi-infinite chain attached by v0.
inline Complex lead_self_energy_semiinfinite(double omega, double t_hop, Complex v0) {
  if (!(t_hop > 0.0)) throw DomainError("lead_self_energy_semiinfinite: t_hop must be > 0");
  const double scale = std::norm(v0) / (t_hop * t_hop);
  const double half = 0.5 * omega;
  if (std::abs(omega) <= 2.0 * t_hop) {
    return scale * Complex(half, -std::sqrt(std::max(0.0, t_hop * t_hop - half * half)));
  }
  const double sign = omega > 0.0 ? 1.0 : -1.0;
  return scale * Complex(half - sign * std::sqrt(half * half - t_hop * t_hop), 0.0);
}

namespace detail {

inline Matrix lead_sigma_semiinfinite(double omega, Index n, const ChainLeadGeometry& lead) {
  if (lead.attach_site < 0 || lead.attach_site >= n) throw ModelError("chain lead attachment outside the system");
  Matrix sigma = Matrix::Zero(n, n);
  sigma(lead.attach_site, lead.attach_site) = lead_self_energy_semiinfinite(omega, lead.t_hop, lead.v0);
  return sigma;
}

inline std::pair<double, double> fermi_window(const FermiParameters& fp) {
  const double lo = std::min(fp.mu_L, fp.mu_R);
  const double hi = std::max(fp.mu_L, fp.mu_R);
  const double pad = kFermiTailCut * fp.temperature;
  return {lo - pad, hi + pad};
}

}  // namespace detail

/// tr[Gamma^L G^r Gamma^R G^a] with Gamma^alpha = -2 Im Sigma^r_alpha of the semi-infinite chains.
inline double landauer_transmission_semiinfinite(double omega, const SemiInfiniteGeometry& geometry) {
  const Index n = geometry.system.dim();
  const Matrix sigma_L = detail::lead_sigma_semiinfinite(omega, n, geometry.lead_L);
  const Matrix sigma_R = detail::lead_sigma_semiinfinite(omega, n, geometry.lead_R);
  const Matrix gr = green_ret(Complex(omega), geometry.system.matrix(), sigma_L + sigma_R);
  const Matrix gamma_L = -2.0 * matrix_im(sigma_L);
  const Matrix gamma_R = -2.0 * matrix_im(sigma_R);
  return (gamma_L * gr * gamma_R * gr.adjoint()).trace().real();
}

inline CurrentResult current_landauer_semiinfinite(const SemiInfiniteGeometry& geometry, const FermiParameters& fp,
                                                   const QuadratureConfig& config = {}) {
  fp.validate();
  if (fp.mu_L == fp.mu_R) return CurrentResult(0.0, CurrentMethod::LandauerSemiInfinite);
  const auto [lo, hi] = detail::fermi_window(fp);
  std::vector<Pole> kinks;
  for (const auto* lead : {&geometry.lead_L, &geometry.lead_R}) {
    kinks.push_back({-2.0 * lead->t_hop, 0.0});
    kinks.push_back({2.0 * lead->t_hop, 0.0});
  }
  kinks.push_back({fp.mu_L, 0.0});
  kinks.push_back({fp.mu_R, 0.0});
  auto integrand = [&](double omega) {
    const double window = fermi(omega, fp.mu_L, fp.temperature) - fermi(omega, fp.mu_R, fp.temperature);
    if (window == 0.0) return 0.0;
    return window * landauer_transmission_semiinfinite(omega, geometry);
  };
  return from_integral(integrate_interval(integrand, lo, hi, kinks, config), CurrentMethod::LandauerSemiInfinite);
}

// ---------------------------------------------------------------------------
// Finite-gamma Landauer form and the improper Markovian transmission

/// tr[Gamma^L G^r Gamma^R G^a] with the gamma-broadened finite-lead densities.
/// This is a proper transmission function for non-Markovian relaxation.
inline double transmission_finite_gamma(double omega, const JunctionModel& junction) {
  const FermiParameters unused{};
  const SpectralSample s = spectral_sample(omega, junction, unused);
  return (s.gamma_L * s.g_ret * s.gamma_R * s.g_adv).trace().real();
}

/// I = int dw/2pi (f_L(w) - f_R(w)) tr[Gamma^L G^r Gamma^R G^a] at finite gamma.
inline CurrentResult current_nonmarkovian(const JunctionModel& junction, const FermiParameters& fp,
                                          const QuadratureConfig& config = {}) {
  fp.validate();
  require_markovian(junction);
  if (fp.mu_L == fp.mu_R) return CurrentResult(0.0, CurrentMethod::NonMarkovian);
  const auto [lo, hi] = detail::fermi_window(fp);
  auto poles = junction_poles(junction);
  poles.push_back({fp.mu_L, 0.0});
  poles.push_back({fp.mu_R, 0.0});
  auto integrand = [&](double omega) {
    const double window = fermi(omega, fp.mu_L, fp.temperature) - fermi(omega, fp.mu_R, fp.temperature);
    if (window == 0.0) return 0.0;
    return window * transmission_finite_gamma(omega, junction);
  };
  return from_integral(integrate_interval(integrand, lo, hi, poles, config), CurrentMethod::NonMarkovian);
}

enum class TransmissionCaveat {
  /// Not a proper transmission: reservoir occupations are smeared beyond the band.
  NotProperTransmission,
};

struct EffectiveTransmission {
  double value = 0.0;
  TransmissionCaveat caveat = TransmissionCaveat::NotProperTransmission;
};

/// Transmission implied by Markovian relaxation for identical reservoirs. Each
/// L mode carries the pole-sum weight tau_k = -Im[v_k^dagger G^r(w_k + i gamma_k/2) v_k]
/// spread over its Lorentzian:
///
///   T(w) = sum_k Lorentzian_k(w) tau_k.
///
/// Integrated against f_L(w) - f_R(w) it approaches the pole-sum current as
/// gamma -> 0, yet it carries weight outside the band and the resolvent is
/// sampled gamma_k/2 above the real axis, which fills in interference zeros.
class MarkovianTransmission {
 public:
  explicit MarkovianTransmission(const JunctionModel& junction) {
    junction.require_identical("effective_transmission");
    require_positive_gamma(junction);
    const Matrix& h = junction.system().matrix();
    modes_ = junction.lead_L().modes();
    weights_.reserve(modes_.size());
    for (const auto& mode : modes_) {
      const Complex z(mode.omega, 0.5 * mode.gamma);
      const Matrix gr = green_ret(z, h, self_energy_ret(z, junction));
      weights_.push_back(-mode.coupling.dot(gr * mode.coupling).imag());
    }
  }

  EffectiveTransmission operator()(double omega) const {
    double value = 0.0;
    for (std::size_t k = 0; k < modes_.size(); ++k) value += mode_lorentzian(omega, modes_[k]) * weights_[k];
    return {value, TransmissionCaveat::NotProperTransmission};
  }

  /// tau_k in lead-L mode order; their Fermi-weighted sum is the pole-sum current.
  const std::vector<double>& mode_weights() const { return weights_; }

 private:
  std::vector<ReservoirMode> modes_;
  std::vector<double> weights_;
};

inline EffectiveTransmission effective_transmission(double omega, const JunctionModel& junction) {
  return MarkovianTransmission(junction)(omega);
}

// ---------------------------------------------------------------------------
// Asymptotic regimes (identical reservoirs)

/// Large-gamma limit: I ~ 2 sum_k (f~_k^L - f~_k^R) |v_k|^2 / gamma_k.
inline CurrentResult current_large_gamma(const JunctionModel& junction, const FermiParameters& fp) {
  fp.validate();
  junction.require_identical("current_large_gamma");
  require_positive_gamma(junction);
  double current = 0.0;
  for (const auto& mode : junction.lead_L().modes()) {
    const double df = fermi(mode.omega, fp.mu_L, fp.temperature) - fermi(mode.omega, fp.mu_R, fp.temperature);
    current += 2.0 * df * mode.coupling.squaredNorm() / mode.gamma;
  }
  return CurrentResult(current, CurrentMethod::LargeGamma, {{"error_estimate", 0.0}, {"asymptotic", 1.0}});
}

/// Small-gamma limit: I ~ (1/2) sum_k gamma_k (f~_k^L - f~_k^R). Independent of the system.
inline CurrentResult current_small_gamma(const JunctionModel& junction, const FermiParameters& fp) {
  fp.validate();
  junction.require_identical("current_small_gamma");
  require_positive_gamma(junction);
  double current = 0.0;
  for (const auto& mode : junction.lead_L().modes()) {
    const double df = fermi(mode.omega, fp.mu_L, fp.temperature) - fermi(mode.omega, fp.mu_R, fp.temperature);
    current += 0.5 * mode.gamma * df;
  }
  return CurrentResult(current, CurrentMethod::SmallGamma, {{"error_estimate", 0.0}, {"asymptotic", 1.0}});
}

}  // namespace dlvn
