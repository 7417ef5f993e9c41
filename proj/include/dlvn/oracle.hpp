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

// Brute-force reference: the single-particle Lindblad (driven Liouville-von
// Neumann) dynamics on the full system + reservoir space,
//
//   dC/dt = -i[h, C] - {Lambda/2, C} + B,   Lambda = diag(gamma),  B = diag(gamma f~),
//
// with C_ab = <c_b^dagger c_a>. The stationary state solves M C + C M^dagger = B
// with M = i h + Lambda/2. Basis order is [system sites, L modes, R modes].

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "dlvn/format.hpp"
#include "dlvn/model.hpp"
#include "dlvn/spectral.hpp"

namespace dlvn {

struct FullSpaceModel {
  Matrix h_full;
  Eigen::VectorXd relax_diag;
  Eigen::VectorXd target_diag;
  Index n_system = 0;
  Index n_left = 0;
  Index n_right = 0;

  Index dimension() const { return h_full.rows(); }
  Index left_begin() const { return n_system; }
  Index right_begin() const { return n_system + n_left; }

  /// M = i h + diag(relax) / 2.
  Matrix generator() const {
    Matrix m = Complex(0.0, 1.0) * h_full;
    m.diagonal() += (0.5 * relax_diag).cast<Complex>();
    return m;
  }
};

struct CorrelationMatrix {
  Matrix values;
  /// max-norm of M C + C M^dagger - B.
  double residual = 0.0;
  bool used_fallback = false;
};

inline constexpr Index kMaxFullDimension = 2000;
inline constexpr Index kMaxFallbackDimension = 48;
inline constexpr double kSteadyStateTolerance = 1e-10;

inline FullSpaceModel assemble_full_space(const JunctionModel& junction, const FermiParameters& fp) {
  fp.validate();
  require_positive_gamma(junction);
  FullSpaceModel model;
  model.n_system = junction.system_dim();
  model.n_left = static_cast<Index>(junction.lead_L().size());
  model.n_right = static_cast<Index>(junction.lead_R().size());
  const Index n = model.n_system + model.n_left + model.n_right;
  if (n > kMaxFullDimension) {
    throw UsageError("oracle: full space dimension " + std::to_string(n) + " exceeds cap " +
                     std::to_string(kMaxFullDimension));
  }
  model.h_full = Matrix::Zero(n, n);
  model.relax_diag = Eigen::VectorXd::Zero(n);
  model.target_diag = Eigen::VectorXd::Zero(n);
  model.h_full.topLeftCorner(model.n_system, model.n_system) = junction.system().matrix();
  Index a = model.n_system;
  for (const Lead* lead : {&junction.lead_L(), &junction.lead_R()}) {
    const double mu = fp.mu(lead->label());
    for (const auto& mode : lead->modes()) {
      model.h_full(a, a) = mode.omega;
      model.h_full.block(0, a, model.n_system, 1) = mode.coupling;
      model.h_full.block(a, 0, 1, model.n_system) = mode.coupling.adjoint();
      model.relax_diag(a) = mode.gamma;
      model.target_diag(a) = mode.gamma * fermi(mode.omega, mu, fp.temperature);
      ++a;
    }
  }
  return model;
}

inline double steady_state_residual(const FullSpaceModel& model, const Matrix& c) {
  const Matrix m = model.generator();
  Matrix r = m * c + c * m.adjoint();
  r.diagonal() -= model.target_diag.cast<Complex>();
  return max_abs(r);
}

namespace detail {

inline Matrix sylvester_by_eigenbasis(const Matrix& m, const Matrix& b, bool& ok) {
  Eigen::ComplexEigenSolver<Matrix> es(m);
  ok = es.info() == Eigen::Success;
  if (!ok) return {};
  const Matrix& v = es.eigenvectors();
  const auto& lambda = es.eigenvalues();
  Eigen::PartialPivLU<Matrix> lu(v);
  if (!(lu.rcond() > 1e-12)) {
    ok = false;
    return {};
  }
  const Matrix v_inv = lu.inverse();
  Matrix bp = v_inv * b * v_inv.adjoint();
  const Index n = m.rows();
  const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      // Undamped eigenmodes (a system block with no reservoir contact) leave
      // those entries undetermined; take the minimum-norm choice.
      const Complex d = lambda(i) + std::conj(lambda(j));
      bp(i, j) = std::abs(d) > 1e-13 * scale ? bp(i, j) / d : Complex(0.0);
    }
  }
  return v * bp * v.adjoint();
}

/// (I (x) M + conj(M) (x) I) vec(C) = vec(B), column-major vec.
inline Matrix sylvester_vectorized(const Matrix& m, const Matrix& b) {
  const Index n = m.rows();
  Matrix k = Matrix::Zero(n * n, n * n);
  const Matrix mc = m.conjugate();
  for (Index j = 0; j < n; ++j) {
    k.block(j * n, j * n, n, n) += m;
    for (Index l = 0; l < n; ++l) {
      if (mc(j, l) != Complex(0.0)) k.block(j * n, l * n, n, n).diagonal().array() += mc(j, l);
    }
  }
  const Vector x = k.partialPivLu().solve(Eigen::Map<const Vector>(b.data(), n * n));
  return Eigen::Map<const Matrix>(x.data(), n, n);
}

}  // namespace detail

/// Stationary correlation matrix. Eigen-decomposition of M first; a dense
/// vectorized solve is the fallback for small, ill-conditioned cases.
inline CorrelationMatrix solve_steady_state(const FullSpaceModel& model) {
  const Index n = model.dimension();
  for (Index a = model.n_system; a < n; ++a) {
    if (!(model.relax_diag(a) > 0.0)) throw DomainError("oracle: every reservoir mode needs relax > 0");
  }
  const Matrix m = model.generator();
  const Matrix b = model.target_diag.cast<Complex>().asDiagonal();
  const double tol = kSteadyStateTolerance * std::max(1.0, model.target_diag.cwiseAbs().maxCoeff());

  CorrelationMatrix result;
  bool ok = false;
  Matrix c = detail::sylvester_by_eigenbasis(m, b, ok);
  double residual = std::numeric_limits<double>::infinity();
  if (ok) {
    c = 0.5 * (c + c.adjoint());
    residual = steady_state_residual(model, c);
  }
  if (!(residual < tol) && n <= kMaxFallbackDimension) {
    Matrix c2 = detail::sylvester_vectorized(m, b);
    c2 = 0.5 * (c2 + c2.adjoint());
    const double r2 = steady_state_residual(model, c2);
    if (r2 < residual) {
      c = std::move(c2);
      residual = r2;
      result.used_fallback = true;
    }
  }
  if (!(residual < tol)) {
    throw ComputationError("oracle: steady-state solve failed, residual " + std::to_string(residual), residual);
  }
  result.values = std::move(c);
  result.residual = residual;
  return result;
}

inline constexpr double kEstimatorFlagSpread = 1e-8;
inline constexpr double kEstimatorErrorSpread = 1e-6;

/// Injection into lead `side`: sum_k gamma_k (f~_k - C_kk), i.e. flow from that lead into the system.
inline double injection_current(const FullSpaceModel& model, const Matrix& c, LeadLabel side) {
  const Index begin = side == LeadLabel::L ? model.left_begin() : model.right_begin();
  const Index count = side == LeadLabel::L ? model.n_left : model.n_right;
  double s = 0.0;
  for (Index a = begin; a < begin + count; ++a) s += model.target_diag(a) - model.relax_diag(a) * c(a, a).real();
  return s;
}

/// 2 sum_{k in L, i in S} Im(H_ik C_ki): particle flow across the L-system bonds.
inline double bond_current(const FullSpaceModel& model, const Matrix& c) {
  double s = 0.0;
  for (Index k = model.left_begin(); k < model.left_begin() + model.n_left; ++k)
    for (Index i = 0; i < model.n_system; ++i) s += (model.h_full(i, k) * c(k, i)).imag();
  return 2.0 * s;
}

/// Mean of the injection and bond estimators for the L -> system current.
inline CurrentResult current_from_state(const FullSpaceModel& model, const CorrelationMatrix& state,
                                        CurrentMethod method = CurrentMethod::OracleSylvester) {
  const Matrix& c = state.values;
  const double injection = injection_current(model, c, LeadLabel::L);
  const double bond = bond_current(model, c);
  const double injection_R = injection_current(model, c, LeadLabel::R);
  const double spread = std::abs(injection - bond);
  const double magnitude = std::max(std::abs(injection), std::abs(bond));
  const double floor = 1e-12 * std::max(1.0, model.relax_diag.maxCoeff());
  if (spread > kEstimatorErrorSpread * magnitude + floor) {
    throw ConsistencyError("oracle: current estimators disagree (injection " + std::to_string(injection) +
                           ", bond " + std::to_string(bond) + ")");
  }
  const double relative_spread = magnitude > 0.0 ? spread / magnitude : 0.0;
  return CurrentResult(0.5 * (injection + bond), method,
                       {{"error_estimate", spread},
                        {"residual", state.residual},
                        {"estimator_spread", relative_spread},
                        {"spread_flag", spread > kEstimatorFlagSpread * magnitude + floor ? 1.0 : 0.0},
                        {"injection_L", injection},
                        {"injection_R", injection_R},
                        {"bond_L", bond},
                        {"conservation", injection + injection_R}});
}

inline CurrentResult oracle_current(const JunctionModel& junction, const FermiParameters& fp) {
  const auto model = assemble_full_space(junction, fp);
  return current_from_state(model, solve_steady_state(model));
}

/// Debug dump: one "row,col,re,im" line per entry.
inline void write_correlations_csv(std::ostream& out, const CorrelationMatrix& state) {
  out << "row,col,re,im\n";
  const Matrix& c = state.values;
  for (Index i = 0; i < c.rows(); ++i)
    for (Index j = 0; j < c.cols(); ++j)
      out << i << ',' << j << ',' << format_double(c(i, j).real()) << ',' << format_double(c(i, j).imag()) << '\n';
}

// ---------------------------------------------------------------------------
// Time propagation

struct TrajectoryPoint {
  double time = 0.0;
  Matrix correlations;
  double current = 0.0;
};

/// 0.01 / max(row-norm of h, gamma_max).
inline double default_time_step(const FullSpaceModel& model) {
  const double row = model.h_full.cwiseAbs().rowwise().sum().maxCoeff();
  const double g = model.relax_diag.size() ? model.relax_diag.maxCoeff() : 0.0;
  return 0.01 / std::max(row, g);
}

/// Classical fixed-step RK4. Records every `record_every` steps plus the final state.
inline std::vector<TrajectoryPoint> time_evolve(const FullSpaceModel& model, const Matrix& c0, double t_final, double dt,
                                                int record_every = 1) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("time_evolve: dt must be > 0");
  if (!(t_final >= 0.0)) throw DomainError("time_evolve: t_final must be >= 0");
  if (c0.rows() != model.dimension() || c0.cols() != model.dimension()) {
    throw DomainError("time_evolve: initial correlation matrix has the wrong shape");
  }
  record_every = std::max(record_every, 1);
  const Matrix m = model.generator();
  const Matrix ma = m.adjoint();
  const Matrix b = model.target_diag.cast<Complex>().asDiagonal();
  auto rhs = [&](const Matrix& c) -> Matrix { return b - m * c - c * ma; };
  auto current = [&](const Matrix& c) { return injection_current(model, c, LeadLabel::L); };

  const long steps = static_cast<long>(std::ceil(t_final / dt - 1e-12));
  const double h = steps > 0 ? t_final / static_cast<double>(steps) : 0.0;
  const double blowup = 1e3 * std::max(1.0, max_abs(c0));

  std::vector<TrajectoryPoint> trajectory;
  trajectory.push_back({0.0, c0, current(c0)});
  Matrix c = c0;
  for (long s = 1; s <= steps; ++s) {
    const Matrix k1 = rhs(c);
    const Matrix k2 = rhs(c + 0.5 * h * k1);
    const Matrix k3 = rhs(c + 0.5 * h * k2);
    const Matrix k4 = rhs(c + h * k3);
    c += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double norm = max_abs(c);
    if (!std::isfinite(norm) || norm > blowup) {
      throw StepSizeError("time_evolve: solution norm grew to " + std::to_string(norm) + " at t = " +
                              std::to_string(s * h) + "; reduce dt",
                          norm);
    }
    if (s % record_every == 0 || s == steps) trajectory.push_back({s * h, c, current(c)});
  }
  return trajectory;
}

inline constexpr long kMaxDefaultSteps = 2000000;

/// Horizon over which the slowest correlation decays by e^-50: 50 / min(gamma_min,
/// 2 min Re lambda(M)), never below 50 / gamma_min and capped at kMaxDefaultSteps steps.
inline double default_relaxation_time(const FullSpaceModel& model, double gamma_min) {
  Eigen::ComplexEigenSolver<Matrix> es(model.generator(), false);
  double rate = gamma_min;
  if (es.info() == Eigen::Success) rate = std::min(rate, 2.0 * es.eigenvalues().real().minCoeff());
  const double cap = kMaxDefaultSteps * default_time_step(model);
  if (!(rate > 0.0)) return cap;
  return std::min(50.0 / rate, std::max(cap, 50.0 / gamma_min));
}

/// Current after propagating from the zero-bias equilibrium (mu = mean of mu_L, mu_R)
/// for t_final; a negative t_final selects default_relaxation_time.
inline CurrentResult oracle_time_evolution_current(const JunctionModel& junction, const FermiParameters& fp,
                                                   double t_final = -1.0) {
  const auto model = assemble_full_space(junction, fp);
  const double mid = 0.5 * (fp.mu_L + fp.mu_R);
  const auto equilibrium_model = assemble_full_space(junction, {mid, mid, fp.temperature});
  const auto c0 = solve_steady_state(equilibrium_model);
  if (t_final < 0.0) t_final = default_relaxation_time(model, junction.min_gamma());
  const auto trajectory = time_evolve(model, c0.values, t_final, default_time_step(model), 1 << 30);
  const Matrix& c = trajectory.back().correlations;
  const double injection = injection_current(model, c, LeadLabel::L);
  const double bond = bond_current(model, c);
  return CurrentResult(0.5 * (injection + bond), CurrentMethod::OracleTimeEvolution,
                       {{"error_estimate", std::abs(injection - bond)},
                        {"residual", steady_state_residual(model, c)},
                        {"t_final", t_final}});
}

}  // namespace dlvn
