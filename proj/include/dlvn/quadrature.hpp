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

// Globally adaptive Gauss-Kronrod (7/15) quadrature over the real line for
// integrands built from sums of Lorentzians. Initial panel boundaries are
// placed at every pole and at +-width around it; the two semi-infinite tails
// are mapped onto [0, 1).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "dlvn/errors.hpp"

namespace dlvn {

struct QuadratureConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  /// Core window extends this many max-widths beyond the outermost poles.
  double window_pad = 40.0;
  int max_panels = 20000;
  bool split_at_poles = true;

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw DomainError("quadrature tolerances must be > 0");
    if (!(window_pad >= 0.0) || !std::isfinite(window_pad)) throw DomainError("quadrature window_pad must be >= 0");
    if (max_panels < 1) throw DomainError("quadrature max_panels must be >= 1");
  }
  friend bool operator==(const QuadratureConfig&, const QuadratureConfig&) = default;
};

/// A Lorentzian-like feature: center and full width. Width 0 marks a plain breakpoint.
struct Pole {
  double center = 0.0;
  double width = 0.0;
};

template <class T>
struct Integral {
  T value{};
  double error_estimate = 0.0;
  int panels = 0;
};

namespace quad_detail {

// Kronrod abscissae on [-1, 1] (positive half, descending); odd indices are the Gauss points.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

enum class Map { Identity, UpperTail, LowerTail };

template <class T>
struct Panel {
  double a, b;
  Map map;
  double anchor;
  T value;
  double error;
};

template <class T>
struct ByError {
  bool operator()(const Panel<T>& x, const Panel<T>& y) const { return x.error < y.error; }
};

template <class F, class T>
T evaluate_mapped(F& f, double s, Map map, double anchor) {
  switch (map) {
    case Map::Identity: return f(s);
    case Map::UpperTail: {
      const double u = 1.0 - s;
      return f(anchor + s / u) * (1.0 / (u * u));
    }
    case Map::LowerTail: {
      const double u = 1.0 - s;
      return f(anchor - s / u) * (1.0 / (u * u));
    }
  }
  return T{};
}

template <class T, class F>
Panel<T> gauss_kronrod(F& f, double a, double b, Map map, double anchor) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = evaluate_mapped<F, T>(f, center, map, anchor);
  T kronrod = fc * kWgk[7];
  T gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const T f1 = evaluate_mapped<F, T>(f, center - dx, map, anchor);
    const T f2 = evaluate_mapped<F, T>(f, center + dx, map, anchor);
    kronrod += (f1 + f2) * kWgk[j];
    if (j % 2 == 1) gauss += (f1 + f2) * kWg[j / 2];
  }
  kronrod *= half;
  gauss *= half;
  return Panel<T>{a, b, map, anchor, kronrod, std::abs(kronrod - gauss)};
}

template <class T>
double real_part(const T& v) {
  if constexpr (std::is_arithmetic_v<T>) {
    return static_cast<double>(v);
  } else {
    return v.real();
  }
}

template <class T, class F>
Integral<T> adaptive(F& f, std::vector<Panel<T>> initial, const QuadratureConfig& config) {
  config.validate();
  std::priority_queue<Panel<T>, std::vector<Panel<T>>, ByError<T>> queue;
  T total{};
  double total_error = 0.0;
  for (auto& seed : initial) {
    auto p = gauss_kronrod<T>(f, seed.a, seed.b, seed.map, seed.anchor);
    total += p.value;
    total_error += p.error;
    queue.push(std::move(p));
  }
  auto converged = [&] { return total_error <= config.rel_tol * std::abs(total) + config.abs_tol; };
  auto resum = [&] {
    // Running sums drift; recompute from the heap contents.
    auto copy = queue;
    total = T{};
    total_error = 0.0;
    while (!copy.empty()) {
      total += copy.top().value;
      total_error += copy.top().error;
      copy.pop();
    }
  };
  long iterations = 0;
  while (true) {
    if (converged()) {
      resum();
      if (converged()) break;
    }
    if (!std::isfinite(total_error) || !std::isfinite(std::abs(total))) {
      throw AccuracyError("integrate_omega: integrand produced a non-finite value", real_part(total), total_error);
    }
    if (static_cast<int>(queue.size()) >= config.max_panels) {
      resum();
      if (converged()) break;
      throw AccuracyError("integrate_omega: max_panels (" + std::to_string(config.max_panels) +
                              ") exceeded; achieved error " + std::to_string(total_error),
                          real_part(total), total_error);
    }
    Panel<T> worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      resum();
      throw AccuracyError("integrate_omega: panel width reached floating-point resolution", real_part(total),
                          total_error);
    }
    auto left = gauss_kronrod<T>(f, worst.a, mid, worst.map, worst.anchor);
    auto right = gauss_kronrod<T>(f, mid, worst.b, worst.map, worst.anchor);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    queue.push(std::move(left));
    queue.push(std::move(right));
    if (++iterations % 256 == 0) resum();
  }
  return Integral<T>{total, total_error, static_cast<int>(queue.size())};
}

inline void check_resolvable(std::span<const Pole> poles) {
  for (const auto& p : poles) {
    if (!std::isfinite(p.center) || !std::isfinite(p.width) || p.width < 0.0) {
      throw DomainError("integrate_omega: pole with non-finite center or negative width");
    }
    if (p.width > 0.0 && (p.center + 0.25 * p.width == p.center || p.center - 0.25 * p.width == p.center)) {
      throw AccuracyError("integrate_omega: Lorentzian width " + std::to_string(p.width) +
                              " is below floating-point resolution at " + std::to_string(p.center),
                          0.0, std::numeric_limits<double>::infinity());
    }
  }
}

/// Sorted, deduplicated breakpoints strictly inside (lo, hi), plus both ends.
inline std::vector<double> breakpoints(std::span<const Pole> poles, double lo, double hi, bool split) {
  std::vector<double> pts{lo, hi};
  if (split) {
    for (const auto& p : poles) {
      for (double x : {p.center - p.width, p.center, p.center + p.width}) {
        if (x > lo && x < hi) pts.push_back(x);
      }
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace quad_detail

template <class F>
using integrand_value_t = std::decay_t<std::invoke_result_t<F&, double>>;

/// Integral of f over the whole real line (no 1/2pi factor).
template <class F>
Integral<integrand_value_t<F>> integrate_omega(F&& f, std::span<const Pole> poles, const QuadratureConfig& config) {
  using T = integrand_value_t<F>;
  using namespace quad_detail;
  check_resolvable(poles);
  double lo = -1.0, hi = 1.0;
  if (!poles.empty()) {
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    double max_width = 0.0;
    for (const auto& p : poles) {
      lo = std::min(lo, p.center);
      hi = std::max(hi, p.center);
      max_width = std::max(max_width, p.width);
    }
    const double pad = std::max(config.window_pad * max_width, 1.0);
    lo -= pad;
    hi += pad;
  }
  const auto pts = breakpoints(poles, lo, hi, config.split_at_poles);
  std::vector<Panel<T>> seeds;
  seeds.reserve(pts.size() + 1);
  seeds.push_back(Panel<T>{0.0, 1.0, Map::LowerTail, lo, T{}, 0.0});
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) seeds.push_back(Panel<T>{pts[i], pts[i + 1], Map::Identity, 0.0, T{}, 0.0});
  seeds.push_back(Panel<T>{0.0, 1.0, Map::UpperTail, hi, T{}, 0.0});
  return adaptive<T>(f, std::move(seeds), config);
}

/// Integral of f over [a, b] with extra initial breakpoints.
template <class F>
Integral<integrand_value_t<F>> integrate_interval(F&& f, double a, double b, std::span<const Pole> poles,
                                                  const QuadratureConfig& config) {
  using T = integrand_value_t<F>;
  using namespace quad_detail;
  if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b)) throw DomainError("integrate_interval: bad interval");
  if (a == b) return Integral<T>{T{}, 0.0, 0};
  check_resolvable(poles);
  const auto pts = breakpoints(poles, a, b, config.split_at_poles);
  std::vector<Panel<T>> seeds;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) seeds.push_back(Panel<T>{pts[i], pts[i + 1], Map::Identity, 0.0, T{}, 0.0});
  return adaptive<T>(f, std::move(seeds), config);
}

}  // namespace dlvn
