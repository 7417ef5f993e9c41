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

// Mode and system Green's functions, self-energies and spectral densities
// for a junction with Markovian-relaxed reservoir modes.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dlvn/model.hpp"

namespace dlvn {

enum class LesserKind { Markovian, NonMarkovian };

inline void require_positive_gamma(const ReservoirMode& mode) {
  if (!(mode.gamma > 0.0)) throw DomainError("mode relaxation gamma must be > 0");
}

inline void require_positive_gamma(const JunctionModel& junction) {
  for (const Lead* lead : {&junction.lead_L(), &junction.lead_R()})
    for (const auto& m : lead->modes()) require_positive_gamma(m);
}

/// 1 / (z - omega_k + i gamma_k / 2), defined for any complex z.
inline Complex g_mode_ret(Complex z, const ReservoirMode& mode) {
  require_positive_gamma(mode);
  return 1.0 / (z - mode.omega + Complex(0.0, 0.5 * mode.gamma));
}
inline Complex g_mode_ret(double omega, const ReservoirMode& mode) { return g_mode_ret(Complex(omega), mode); }
inline Complex g_mode_adv(double omega, const ReservoirMode& mode) { return std::conj(g_mode_ret(omega, mode)); }

/// Unit-normalized Lorentzian gamma / ((omega - omega_k)^2 + gamma^2/4) = i (g^r - g^a).
inline double mode_lorentzian(double omega, const ReservoirMode& mode) {
  const double d = omega - mode.omega;
  return mode.gamma / (d * d + 0.25 * mode.gamma * mode.gamma);
}

/// Anti-Hermitian part (M - M^dagger) / 2i; for a quadratic form v^dagger (Im M) v = Im(v^dagger M v).
inline Matrix matrix_im(const Matrix& m) { return (m - m.adjoint()) / Complex(0.0, 2.0); }

inline Matrix self_energy_ret(Complex z, const Lead& lead) {
  const Index n = lead.system_dim();
  Matrix sigma = Matrix::Zero(n, n);
  for (const auto& m : lead.modes()) sigma.noalias() += g_mode_ret(z, m) * (m.coupling * m.coupling.adjoint());
  return sigma;
}

inline Matrix self_energy_ret(Complex z, const JunctionModel& junction) {
  return self_energy_ret(z, junction.lead_L()) + self_energy_ret(z, junction.lead_R());
}
inline Matrix self_energy_ret(double omega, const JunctionModel& junction) {
  return self_energy_ret(Complex(omega), junction);
}

/// (z - H - Sigma)^{-1}. Rejects Im z < 0 and reports the condition estimate on failure.
inline Matrix green_ret(Complex z, const Matrix& h_system, const Matrix& sigma) {
  if (z.imag() < 0.0) throw DomainError("green_ret: frequency must lie in the closed upper half-plane");
  const Index n = h_system.rows();
  Matrix a = -h_system - sigma;
  a.diagonal().array() += z;
  Eigen::PartialPivLU<Matrix> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond > 64.0 * std::numeric_limits<double>::epsilon())) {
    throw ComputationError("green_ret: resolvent is numerically singular (condition ~ " +
                               std::to_string(rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity()) +
                               ")",
                           rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity());
  }
  return lu.solve(Matrix::Identity(n, n));
}

inline Matrix green_ret(Complex z, const JunctionModel& junction) {
  return green_ret(z, junction.system().matrix(), self_energy_ret(z, junction));
}
inline Matrix green_ret(double omega, const JunctionModel& junction) { return green_ret(Complex(omega), junction); }
inline Matrix green_adv(double omega, const JunctionModel& junction) { return green_ret(omega, junction).adjoint(); }

/// Gamma^alpha(omega) = sum_k v_k v_k^dagger * Lorentzian_k(omega).
inline Matrix spectral_density(double omega, const Lead& lead) {
  const Index n = lead.system_dim();
  Matrix gamma = Matrix::Zero(n, n);
  for (const auto& m : lead.modes()) {
    require_positive_gamma(m);
    gamma.noalias() += mode_lorentzian(omega, m) * (m.coupling * m.coupling.adjoint());
  }
  return gamma;
}

/// Same sum weighted by the occupation at the mode frequency, f(omega_k).
inline Matrix weighted_spectral_density(double omega, const Lead& lead, const FermiParameters& fp, LeadLabel side) {
  const Index n = lead.system_dim();
  Matrix gamma = Matrix::Zero(n, n);
  const double mu = fp.mu(side);
  for (const auto& m : lead.modes()) {
    require_positive_gamma(m);
    const double f = fermi(m.omega, mu, fp.temperature);
    if (f == 0.0) continue;
    gamma.noalias() += (f * mode_lorentzian(omega, m)) * (m.coupling * m.coupling.adjoint());
  }
  return gamma;
}

/// Mode lesser function; Markovian weights by f(omega_k), non-Markovian by f(omega).
inline Complex g_mode_lesser(double omega, const ReservoirMode& mode, double mu, double temperature,
                             LesserKind kind) {
  require_positive_gamma(mode);
  const double f = kind == LesserKind::Markovian ? fermi(mode.omega, mu, temperature) : fermi(omega, mu, temperature);
  return Complex(0.0, f * mode_lorentzian(omega, mode));
}

/// Everything the current integrands need at one real frequency.
struct SpectralSample {
  double omega = 0.0;
  Matrix gamma_L, gamma_R;
  Matrix gamma_L_weighted, gamma_R_weighted;
  Matrix g_ret, g_adv;
};

namespace detail {

inline void accumulate_lead(double omega, const Lead& lead, double mu, double temperature, Matrix& gamma,
                            Matrix& gamma_weighted, Matrix& sigma) {
  for (const auto& m : lead.modes()) {
    require_positive_gamma(m);
    const Complex g = 1.0 / Complex(omega - m.omega, 0.5 * m.gamma);
    const double lor = -2.0 * g.imag();
    const Matrix vv = m.coupling * m.coupling.adjoint();
    gamma.noalias() += lor * vv;
    const double f = fermi(m.omega, mu, temperature);
    if (f != 0.0) gamma_weighted.noalias() += (f * lor) * vv;
    sigma.noalias() += g * vv;
  }
}

}  // namespace detail

inline SpectralSample spectral_sample(double omega, const JunctionModel& junction, const FermiParameters& fp) {
  const Index n = junction.system_dim();
  SpectralSample s;
  s.omega = omega;
  s.gamma_L = s.gamma_R = s.gamma_L_weighted = s.gamma_R_weighted = Matrix::Zero(n, n);
  Matrix sigma = Matrix::Zero(n, n);
  detail::accumulate_lead(omega, junction.lead_L(), fp.mu_L, fp.temperature, s.gamma_L, s.gamma_L_weighted, sigma);
  detail::accumulate_lead(omega, junction.lead_R(), fp.mu_R, fp.temperature, s.gamma_R, s.gamma_R_weighted, sigma);
  s.g_ret = green_ret(Complex(omega), junction.system().matrix(), sigma);
  s.g_adv = s.g_ret.adjoint();
  return s;
}

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Residual of G^r - G^a = -i G^r (Gamma^L + Gamma^R) G^a = -i G^a (Gamma^L + Gamma^R) G^r,
/// taking the Hamiltonian explicitly so that a corrupted matrix can be checked.
inline double verify_resolvent_identity(double omega, const Matrix& h_system, const Lead& lead_L, const Lead& lead_R) {
  const Matrix sigma = self_energy_ret(Complex(omega), lead_L) + self_energy_ret(Complex(omega), lead_R);
  const Matrix gr = green_ret(Complex(omega), h_system, sigma);
  const Matrix ga = gr.adjoint();
  const Matrix gamma = spectral_density(omega, lead_L) + spectral_density(omega, lead_R);
  const Complex i(0.0, 1.0);
  const Matrix diff = gr - ga;
  return std::max(max_abs(diff + i * gr * gamma * ga), max_abs(diff + i * ga * gamma * gr));
}

inline double verify_resolvent_identity(double omega, const JunctionModel& junction) {
  return verify_resolvent_identity(omega, junction.system().matrix(), junction.lead_L(), junction.lead_R());
}

/// Residual of G^r - G^a = -2i G^a Gamma^R G^r = -2i G^a Gamma^L G^r (identical reservoirs only).
inline double verify_identical_reservoir_identity(double omega, const JunctionModel& junction) {
  junction.require_identical("verify_identical_reservoir_identity");
  const Matrix gr = green_ret(omega, junction);
  const Matrix ga = gr.adjoint();
  const Matrix diff = gr - ga;
  const Complex two_i(0.0, 2.0);
  const double res_R = max_abs(diff + two_i * ga * spectral_density(omega, junction.lead_R()) * gr);
  const double res_L = max_abs(diff + two_i * ga * spectral_density(omega, junction.lead_L()) * gr);
  return std::max(res_R, res_L);
}

}  // namespace dlvn
