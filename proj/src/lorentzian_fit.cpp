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

#include "readout/lorentzian_fit.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "readout/errors.hpp"
#include "readout/least_squares.hpp"

namespace readout {

namespace {

constexpr double kMinFeature = 1e-3;     // relative deviation from background
constexpr double kPeakFloor = 0.2;       // secondary peaks below this fraction are ignored
constexpr double kValleyRatio = 0.7;     // a valley this deep separates two peaks

std::size_t count_resolved_peaks(const std::vector<double>& dev) {
  const auto n = dev.size();
  const double top = *std::max_element(dev.begin(), dev.end());
  std::vector<std::size_t> peaks;
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? dev[i - 1] : -1.0;
    const double right = i + 1 < n ? dev[i + 1] : -1.0;
    if (dev[i] >= left && dev[i] > right && dev[i] >= kPeakFloor * top) peaks.push_back(i);
  }
  if (peaks.size() < 2) return peaks.size();
  std::size_t resolved = 1;
  std::size_t last = peaks.front();
  for (std::size_t k = 1; k < peaks.size(); ++k) {
    const std::size_t p = peaks[k];
    const double valley = *std::min_element(dev.begin() + static_cast<long>(last), dev.begin() + static_cast<long>(p) + 1);
    if (valley < kValleyRatio * std::min(dev[last], dev[p])) {
      ++resolved;
      last = p;
    } else if (dev[p] > dev[last]) {
      last = p;
    }
  }
  return resolved;
}

}  // namespace

std::complex<double> lorentzian_reflection(double omega, double center, double kappa, double kappa_ext,
                                           std::complex<double> background) {
  const std::complex<double> denom(kappa / 2, -(omega - center));
  return background * (1.0 - kappa_ext / denom);
}

LinewidthFit effective_linewidth(std::span<const std::complex<double>> trace, std::span<const double> freqs) {
  if (trace.size() != freqs.size()) throw DomainError("trace and frequency grid differ in length");
  if (trace.size() < 8) throw DomainError("linewidth fit needs at least 8 points");
  const std::size_t n = trace.size();

  const std::complex<double> background = (trace.front() + trace.back()) / 2.0;
  std::vector<double> dev(n);
  for (std::size_t i = 0; i < n; ++i) dev[i] = std::abs(trace[i] - background);
  const auto peak_it = std::max_element(dev.begin(), dev.end());
  const double peak = *peak_it;
  if (peak < kMinFeature * std::abs(background))
    throw FitError("no resonant feature: deviation from background below threshold");
  if (count_resolved_peaks(dev) > 1)
    throw AmbiguityError("trace contains more than one resonant feature");

  // Initial guess from the half maximum of |S - background|^2.
  const std::size_t ip = static_cast<std::size_t>(peak_it - dev.begin());
  const double half = peak / std::sqrt(2.0);
  std::size_t lo = ip, hi = ip;
  while (lo > 0 && dev[lo] > half) --lo;
  while (hi + 1 < n && dev[hi] > half) ++hi;
  double kappa0 = std::abs(freqs[hi] - freqs[lo]);
  if (!(kappa0 > 0)) kappa0 = std::abs(freqs[1] - freqs[0]);
  const double center0 = freqs[ip];
  const double ext0 = peak / std::abs(background) * kappa0 / 2;

  // Parameters: center offset, kappa, kappa_ext, Re/Im background.
  auto residual = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd r(2 * n);
    const std::complex<double> bg(x[3], x[4]);
    for (std::size_t i = 0; i < n; ++i) {
      const auto d = lorentzian_reflection(freqs[i], center0 + x[0], x[1], x[2], bg) - trace[i];
      r[static_cast<Eigen::Index>(2 * i)] = d.real();
      r[static_cast<Eigen::Index>(2 * i + 1)] = d.imag();
    }
    return r;
  };
  Eigen::VectorXd x0(5);
  x0 << 0.0, kappa0, ext0, background.real(), background.imag();
  Eigen::VectorXd scale(5);
  const double bg_abs = std::abs(background);
  scale << kappa0, kappa0, kappa0, bg_abs, bg_abs;
  LmOptions options;
  options.max_iterations = 400;
  const auto fit = levenberg_marquardt<double>(residual, x0, scale, options);
  if (!fit.params.allFinite() || !(fit.params[1] > 0))
    throw FitError("Lorentzian fit did not converge to a positive linewidth");

  LinewidthFit out;
  out.center = center0 + fit.params[0];
  out.kappa = fit.params[1];
  out.kappa_ext_fraction = fit.params[2] / fit.params[1];
  out.background = {fit.params[3], fit.params[4]};
  out.residual_norm = std::sqrt(fit.cost);
  return out;
}

}  // namespace readout
