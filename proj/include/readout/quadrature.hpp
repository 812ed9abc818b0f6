// Copyright 2026 The readout-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef READOUT_QUADRATURE_HPP
#define READOUT_QUADRATURE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace readout {

struct QuadratureResult {
  double value{};
  double error_estimate{};
  int evaluations{};
};

namespace detail {

// 15-point Kronrod nodes on [-1, 1] (non-negative half) with the embedded
// 7-point Gauss weights.
inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename F>
void gauss_kronrod_15(F& f, double a, double b, double& kronrod, double& gauss) {
  const double center = (a + b) / 2;
  const double half = (b - a) / 2;
  const double fc = f(center);
  kronrod = fc * kronrod_weights[7];
  gauss = fc * gauss_weights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kronrod_nodes[i];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kronrod_weights[i] * sum;
    if (i % 2 == 1) gauss += gauss_weights[i / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (G7/K15) quadrature over [a, b] with
/// initial breakpoints. Subdivides the worst interval until the summed error
/// estimate falls below max(abs_tol, rel_tol * |integral|).
template <typename F>
QuadratureResult integrate_adaptive(F f, std::vector<double> breakpoints, double rel_tol,
                                    double abs_tol = 0.0, int max_intervals = 4000) {
  struct Interval {
    double a, b, value, error;
  };
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

  QuadratureResult out;
  std::vector<Interval> intervals;
  auto evaluate = [&](double a, double b) {
    double k = 0, g = 0;
    detail::gauss_kronrod_15(f, a, b, k, g);
    out.evaluations += 15;
    return Interval{a, b, k, std::abs(k - g)};
  };
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
    intervals.push_back(evaluate(breakpoints[i], breakpoints[i + 1]));

  auto totals = [&] {
    double v = 0, e = 0;
    for (const auto& iv : intervals) {
      v += iv.value;
      e += iv.error;
    }
    return std::pair{v, e};
  };
  auto [value, error] = totals();
  while (error > std::max(abs_tol, rel_tol * std::abs(value)) &&
         static_cast<int>(intervals.size()) < max_intervals) {
    auto worst = std::max_element(intervals.begin(), intervals.end(),
                                  [](const Interval& l, const Interval& r) { return l.error < r.error; });
    const double a = worst->a, b = worst->b, mid = (a + b) / 2;
    *worst = evaluate(a, mid);
    intervals.push_back(evaluate(mid, b));
    std::tie(value, error) = totals();
  }
  out.value = value;
  out.error_estimate = error;
  return out;
}

/// Integral of f over the whole real line through x = center + scale tan(theta).
/// Integrands decaying at least as 1/x^2 become bounded on (-pi/2, pi/2), so no
/// window truncation is needed. `features` are abscissae where f has structure.
template <typename F>
QuadratureResult integrate_real_line(F f, double center, double scale, double rel_tol,
                                     const std::vector<double>& features = {}) {
  constexpr double half_pi = std::numbers::pi / 2;
  auto mapped = [&](double theta) {
    if (std::abs(theta) >= half_pi) return 0.0;
    const double c = std::cos(theta);
    return f(center + scale * std::tan(theta)) * scale / (c * c);
  };
  std::vector<double> breaks = {-half_pi, 0.0, half_pi};
  for (double x : features) breaks.push_back(std::atan((x - center) / scale));
  return integrate_adaptive(mapped, breaks, rel_tol);
}

}  // namespace readout

#endif  // READOUT_QUADRATURE_HPP
