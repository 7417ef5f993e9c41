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

// Seeded random junctions for property checks and the validate command.

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "dlvn/model.hpp"

namespace dlvn {

struct RandomJunctionSpec {
  int max_system_dim = 3;
  int min_modes = 4;
  int max_modes = 20;
  double gamma_lo = 0.01;
  double gamma_hi = 1.0;
  double band = 2.0;
  double coupling = 0.3;
};

inline Matrix random_hermitian(std::mt19937_64& rng, Index n, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix h(n, n);
  for (Index i = 0; i < n; ++i) {
    h(i, i) = normal(rng);
    for (Index j = i + 1; j < n; ++j) {
      h(i, j) = Complex(normal(rng), normal(rng));
      h(j, i) = std::conj(h(i, j));
    }
  }
  return h;
}

inline Lead random_lead(std::mt19937_64& rng, LeadLabel label, Index system_dim, int n_modes,
                        const RandomJunctionSpec& spec) {
  std::uniform_real_distribution<double> omega(-spec.band, spec.band);
  std::uniform_real_distribution<double> log_gamma(std::log(spec.gamma_lo), std::log(spec.gamma_hi));
  std::normal_distribution<double> normal(0.0, spec.coupling);
  std::vector<ReservoirMode> modes;
  for (int k = 0; k < n_modes; ++k) {
    ReservoirMode m;
    m.omega = omega(rng);
    m.gamma = std::exp(log_gamma(rng));
    m.coupling = Vector(system_dim);
    for (Index i = 0; i < system_dim; ++i) m.coupling(i) = Complex(normal(rng), normal(rng));
    modes.push_back(std::move(m));
  }
  return Lead(label, std::move(modes));
}

/// Non-identical leads unless `identical` is set, in which case R copies L.
inline JunctionModel random_junction(std::mt19937_64& rng, bool identical, const RandomJunctionSpec& spec = {}) {
  std::uniform_int_distribution<int> dim(1, spec.max_system_dim);
  std::uniform_int_distribution<int> count(spec.min_modes, spec.max_modes);
  const Index n = dim(rng);
  SystemHamiltonian h(random_hermitian(rng, n));
  Lead left = random_lead(rng, LeadLabel::L, n, count(rng), spec);
  if (identical) {
    Lead right(LeadLabel::R, left.modes());
    return JunctionModel(std::move(h), std::move(left), std::move(right));
  }
  Lead right = random_lead(rng, LeadLabel::R, n, count(rng), spec);
  return JunctionModel(std::move(h), std::move(left), std::move(right));
}

}  // namespace dlvn
