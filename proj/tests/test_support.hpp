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

// Junction fixtures shared by the unit and acceptance suites.

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "dlvn/model.hpp"
#include "dlvn/random.hpp"

namespace dlvn::testing {

using dlvn::random_hermitian;
using dlvn::random_junction;
using dlvn::random_lead;
using dlvn::RandomJunctionSpec;

inline std::pair<Lead, Lead> chain_leads(int n, double t_hop, Complex v0, double gamma, Index system_dim = 1) {
  return {discretize_lead_chain(n, t_hop, v0, UniformGamma{gamma}, LeadLabel::L, system_dim),
          discretize_lead_chain(n, t_hop, v0, UniformGamma{gamma}, LeadLabel::R, system_dim)};
}

inline JunctionModel single_site(double eps0, int n, double t_hop, Complex v0, double gamma) {
  auto [l, r] = chain_leads(n, t_hop, v0, gamma);
  return build_single_site_junction(eps0, std::move(l), std::move(r));
}

inline JunctionModel two_site(double eps1, double eps2, Complex h12, int n, double t_hop, Complex v0, double gamma) {
  auto [l, r] = chain_leads(n, t_hop, v0, gamma, 2);
  return build_two_site_interference_junction(eps1, eps2, h12, std::move(l), std::move(r));
}

inline double relative_difference(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

}  // namespace dlvn::testing
