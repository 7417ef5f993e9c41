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

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <random>

#include "dlvn/currents.hpp"
#include "dlvn/spectral.hpp"
#include "test_support.hpp"

namespace dlvn {
namespace {

ReservoirMode mode(double omega, double gamma, Vector v) { return ReservoirMode{omega, gamma, std::move(v)}; }

TEST(ModeGreen, PeakValue) {
  const auto m = mode(0.4, 0.2, Vector::Ones(1));
  const Complex g = g_mode_ret(0.4, m);
  EXPECT_NEAR(g.real(), 0.0, 1e-15);
  EXPECT_NEAR(g.imag(), -2.0 / 0.2, 1e-12);
  EXPECT_EQ(g_mode_adv(0.4, m), std::conj(g));
}

TEST(ModeGreen, HalfWidth) {
  const auto m = mode(-1.0, 0.3, Vector::Ones(1));
  for (double s : {-1.0, 1.0}) {
    EXPECT_NEAR(std::abs(g_mode_ret(-1.0 + s * 0.15, m)), (2.0 / 0.3) / std::sqrt(2.0), 1e-12);
  }
}

TEST(ModeGreen, LorentzianNormalization) {
  const auto m = mode(0.7, 0.05, Vector::Ones(1));
  const std::vector<Pole> poles{{m.omega, m.gamma}};
  auto r = integrate_omega(
      [&](double w) { return (Complex(0, 1) * (g_mode_ret(w, m) - g_mode_adv(w, m))).real() / kTwoPi; }, poles, {});
  EXPECT_NEAR(r.value, 1.0, 1e-8);
}

TEST(ModeGreen, NonPositiveGammaIsDomainError) {
  EXPECT_THROW(g_mode_ret(0.0, mode(0.0, 0.0, Vector::Ones(1))), DomainError);
  EXPECT_THROW(g_mode_ret(0.0, mode(0.0, -0.1, Vector::Ones(1))), DomainError);
}

TEST(SelfEnergy, SingleModeScalar) {
  Lead l(LeadLabel::L, {mode(0.1, 0.2, Vector::Constant(1, 0.3))});
  Lead r(LeadLabel::R, {mode(0.1, 0.2, Vector::Constant(1, 0.3))});
  const auto j = build_single_site_junction(0.0, l, r);
  const Complex expected = 0.09 / Complex(0.5 - 0.1, 0.1);
  EXPECT_NEAR(std::abs(self_energy_ret(Complex(0.5), l)(0, 0) - expected), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(self_energy_ret(0.5, j)(0, 0) - 2.0 * expected), 0.0, 1e-15);
}

TEST(SelfEnergy, IdenticalReservoirsDoubleOneLead) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    const auto j = testing::random_junction(rng, true);
    const double w = std::uniform_real_distribution<double>(-3, 3)(rng);
    EXPECT_LT(max_abs(self_energy_ret(w, j) - 2.0 * self_energy_ret(Complex(w), j.lead_L())), 1e-13);
  }
}

TEST(SelfEnergy, NegativeImaginaryDiagonal) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 20; ++t) {
    const auto j = testing::random_junction(rng, false);
    for (int i = -60; i <= 60; ++i) {
      const Matrix s = self_energy_ret(i * 0.05, j);
      for (Index a = 0; a < s.rows(); ++a) EXPECT_LE(s(a, a).imag(), 0.0);
    }
  }
}

TEST(GreenRet, DecoupledIsFreeResolvent) {
  Matrix h(2, 2);
  h << 0.3, 0.2, 0.2, -0.5;
  Vector v = Vector::Zero(2);
  Lead l(LeadLabel::L, {mode(0.0, 0.1, v)});
  Lead r(LeadLabel::R, {mode(0.0, 0.1, v)});
  JunctionModel j(SystemHamiltonian(h), l, r);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const double w = 1.1;
  const Matrix gr = green_ret(w, j);
  const Matrix in_eigenbasis = es.eigenvectors().adjoint() * gr * es.eigenvectors();
  for (Index i = 0; i < 2; ++i) {
    EXPECT_NEAR(std::abs(in_eigenbasis(i, i) - 1.0 / (w - es.eigenvalues()(i))), 0.0, 1e-12);
  }
  EXPECT_NEAR(std::abs(in_eigenbasis(0, 1)), 0.0, 1e-12);
}

TEST(GreenRet, SingleSiteScalar) {
  const auto j = testing::single_site(0.2, 6, 1.0, 0.3, 0.1);
  const double w = -0.35;
  const Complex expected = 1.0 / (w - 0.2 - self_energy_ret(w, j)(0, 0));
  EXPECT_NEAR(std::abs(green_ret(w, j)(0, 0) - expected), 0.0, 1e-12);
}

TEST(GreenRet, AdvancedIsAdjoint) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 50; ++t) {
    const auto j = testing::random_junction(rng, t % 2 == 0);
    const double w = std::uniform_real_distribution<double>(-3, 3)(rng);
    EXPECT_LT(max_abs(green_adv(w, j) - green_ret(w, j).adjoint()), 1e-12);
  }
}

TEST(GreenRet, LowerHalfPlaneRejected) {
  const auto j = testing::single_site(0.0, 4, 1.0, 0.2, 0.1);
  EXPECT_THROW(green_ret(Complex(0.0, -1e-3), j), DomainError);
  EXPECT_NO_THROW(green_ret(Complex(0.0, 0.05), j));
}

TEST(GreenRet, SingularResolventReportsCondition) {
  Matrix h = Matrix::Zero(1, 1);
  Matrix sigma = Matrix::Zero(1, 1);
  try {
    green_ret(Complex(0.0), h, sigma);
    FAIL();
  } catch (const ComputationError& e) {
    EXPECT_GT(e.indicator(), 1e12);
  }
}

TEST(SpectralDensity, PeakValueAndPsd) {
  Vector v(2);
  v << Complex(0.3, 0.1), Complex(-0.2, 0.0);
  Lead lead(LeadLabel::L, {mode(0.5, 0.2, v)});
  const Matrix g = spectral_density(0.5, lead);
  EXPECT_LT(max_abs(g - (4.0 / 0.2) * v * v.adjoint()), 1e-12);

  std::mt19937_64 rng(14);
  for (int t = 0; t < 100; ++t) {
    const auto j = testing::random_junction(rng, false);
    const double w = std::uniform_real_distribution<double>(-4, 4)(rng);
    for (const Lead* l : {&j.lead_L(), &j.lead_R()}) {
      const Matrix gm = spectral_density(w, *l);
      EXPECT_LT(max_abs(gm - gm.adjoint()), 1e-14);
      Eigen::SelfAdjointEigenSolver<Matrix> es(gm);
      EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
    }
  }
}

TEST(SpectralDensity, TraceIntegratesToCouplingWeight) {
  std::mt19937_64 rng(15);
  const auto j = testing::random_junction(rng, false);
  double weight = 0.0;
  for (const auto& m : j.lead_L().modes()) weight += m.coupling.squaredNorm();
  const auto poles = junction_poles(j);
  auto r = integrate_omega([&](double w) { return spectral_density(w, j.lead_L()).trace().real() / kTwoPi; }, poles, {});
  EXPECT_NEAR(r.value / weight, 1.0, 1e-8);
}

TEST(WeightedSpectralDensity, LimitsOfTheOccupation) {
  const auto lead = discretize_lead_chain(12, 1.0, 0.3, UniformGamma{0.07}, LeadLabel::L);
  for (double w : {-2.5, -0.3, 0.0, 1.7}) {
    const FermiParameters full{10.0, 10.0, 0.0};
    const FermiParameters empty{-10.0, -10.0, 0.0};
    EXPECT_LT(max_abs(weighted_spectral_density(w, lead, full, LeadLabel::L) - spectral_density(w, lead)), 1e-15);
    EXPECT_EQ(max_abs(weighted_spectral_density(w, lead, empty, LeadLabel::L)), 0.0);
  }
}

TEST(WeightedSpectralDensity, StepWeightsAtZeroTemperature) {
  const auto lead = discretize_lead_chain(12, 1.0, 0.3, UniformGamma{0.07}, LeadLabel::L);
  const FermiParameters fp{0.1, -5.0, 0.0};
  const double w = 0.33;
  Matrix expected = Matrix::Zero(1, 1);
  for (const auto& m : lead.modes()) {
    if (m.omega < 0.1) expected += mode_lorentzian(w, m) * m.coupling * m.coupling.adjoint();
  }
  EXPECT_LT(max_abs(weighted_spectral_density(w, lead, fp, LeadLabel::L) - expected), 1e-15);
}

TEST(LesserFunction, KindsAgreeAtModeFrequency) {
  const auto m = mode(0.3, 0.05, Vector::Ones(1));
  EXPECT_EQ(g_mode_lesser(0.3, m, 0.1, 0.2, LesserKind::Markovian),
            g_mode_lesser(0.3, m, 0.1, 0.2, LesserKind::NonMarkovian));
}

TEST(LesserFunction, KindsAgreeForConstantOccupation) {
  const auto m = mode(0.3, 0.05, Vector::Ones(1));
  for (double w : {-2.0, 0.0, 0.3, 1.9}) {
    EXPECT_EQ(g_mode_lesser(w, m, 1e3, 0.1, LesserKind::Markovian),
              g_mode_lesser(w, m, 1e3, 0.1, LesserKind::NonMarkovian));
  }
}

TEST(LesserFunction, MarkovianIsOccupiedLorentzian) {
  const auto m = mode(-0.2, 0.1, Vector::Ones(1));
  const Complex g = g_mode_lesser(0.1, m, 0.0, 0.0, LesserKind::Markovian);
  EXPECT_DOUBLE_EQ(g.imag(), mode_lorentzian(0.1, m));
  EXPECT_EQ(g_mode_lesser(0.1, m, 0.0, 0.0, LesserKind::NonMarkovian), Complex(0.0));
}

TEST(ResolventIdentity, RandomJunctions) {
  std::mt19937_64 rng(16);
  for (int t = 0; t < 100; ++t) {
    testing::RandomJunctionSpec spec;
    spec.max_system_dim = 4;
    const auto j = testing::random_junction(rng, t % 3 == 0, spec);
    const double w = std::uniform_real_distribution<double>(-3, 3)(rng);
    EXPECT_LT(verify_resolvent_identity(w, j), 1e-10);
  }
}

TEST(ResolventIdentity, ScaledCouplingsAndDecoupledJunction) {
  std::mt19937_64 rng(17);
  const auto j = testing::random_junction(rng, false);
  auto scale = [](const Lead& l, double s) {
    std::vector<ReservoirMode> modes = l.modes();
    for (auto& m : modes) m.coupling *= s;
    return Lead(l.label(), modes);
  };
  const JunctionModel doubled(j.system(), scale(j.lead_L(), 2.0), scale(j.lead_R(), 2.0));
  const JunctionModel decoupled(j.system(), scale(j.lead_L(), 0.0), scale(j.lead_R(), 0.0));
  for (double w : {-1.3, 0.2, 2.2}) {
    EXPECT_LT(verify_resolvent_identity(w, doubled), 1e-10);
    EXPECT_LT(verify_resolvent_identity(w, decoupled), 1e-10);
  }
}

TEST(ResolventIdentity, CorruptedHamiltonianFails) {
  const auto j = testing::two_site(0.0, 0.1, 0.5, 8, 1.0, 0.3, 0.1);
  Matrix h = j.system().matrix();
  h(0, 1) += Complex(0.0, 0.05);
  EXPECT_GT(verify_resolvent_identity(0.3, h, j.lead_L(), j.lead_R()), 1e-6);
}

TEST(IdenticalReservoirIdentity, SymmetricJunctions) {
  const auto one = testing::single_site(0.1, 16, 1.0, 0.2, 0.05);
  const auto two = testing::two_site(0.0, 0.0, 0.5, 16, 1.0, 0.2, 0.05);
  for (int i = -30; i <= 30; ++i) {
    EXPECT_LT(verify_identical_reservoir_identity(i * 0.1, one), 1e-10);
    EXPECT_LT(verify_identical_reservoir_identity(i * 0.1, two), 1e-10);
  }
}

TEST(IdenticalReservoirIdentity, AsymmetricRefuses) {
  std::mt19937_64 rng(18);
  const auto j = testing::random_junction(rng, false);
  EXPECT_THROW(verify_identical_reservoir_identity(0.0, j), UsageError);
}

TEST(SpectralSample, ConsistentWithIndividualFunctions) {
  std::mt19937_64 rng(19);
  const auto j = testing::random_junction(rng, false);
  const FermiParameters fp{0.2, -0.1, 0.05};
  const auto s = spectral_sample(0.17, j, fp);
  EXPECT_LT(max_abs(s.gamma_L - spectral_density(0.17, j.lead_L())), 1e-12);
  EXPECT_LT(max_abs(s.gamma_R_weighted - weighted_spectral_density(0.17, j.lead_R(), fp, LeadLabel::R)), 1e-12);
  EXPECT_LT(max_abs(s.g_ret - green_ret(0.17, j)), 1e-12);
  EXPECT_LT(max_abs(s.g_adv - s.g_ret.adjoint()), 1e-15);
}

}  // namespace
}  // namespace dlvn
