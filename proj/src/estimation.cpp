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

#include "readout/estimation.hpp"

#include <complex>
#include <numbers>

#include "readout/least_squares.hpp"

namespace readout {

LinearFitResult weighted_linear_fit(std::span<const double> x, std::span<const double> y,
                                    std::span<const double> sigma_y) {
  if (x.size() != y.size() || x.size() != sigma_y.size())
    throw DomainError("linear fit inputs must have equal lengths");
  if (x.size() < 3) throw DomainError("linear fit needs at least 3 points");
  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(sigma_y[i] > 0) || !std::isfinite(sigma_y[i])) throw DomainError("linear fit needs positive sigma_y");
    const double w = 1 / (sigma_y[i] * sigma_y[i]);
    sw += w;
    swx += w * x[i];
    swy += w * y[i];
    swxx += w * x[i] * x[i];
    swxy += w * x[i] * y[i];
  }
  const double x_mean = swx / sw;
  const double sxx = swxx - swx * x_mean;  // weighted sum of (x - x_mean)^2
  if (!(sxx > 1e-14 * (swxx + std::numeric_limits<double>::min())))
    throw FitError("linear fit abscissae have zero spread");

  LinearFitResult out;
  out.slope = (swxy - x_mean * swy) / sxx;
  out.intercept = (swy - out.slope * swx) / sw;
  out.covariance(0, 0) = 1 / sxx;
  out.covariance(1, 1) = swxx / (sw * sxx);
  out.covariance(0, 1) = out.covariance(1, 0) = -x_mean / sxx;

  const double y_mean = swy / sw;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = 1 / (sigma_y[i] * sigma_y[i]);
    const double r = y[i] - (out.slope * x[i] + out.intercept);
    ss_res += w * r * r;
    ss_tot += w * (y[i] - y_mean) * (y[i] - y_mean);
  }
  out.chi_squared = ss_res;
  out.r_squared = ss_tot > 0 ? 1 - ss_res / ss_tot : 1.0;
  return out;
}

namespace {

struct RamseyStart {
  double gamma2;
  double detuning;
  double phase;
};

RamseyStart ramsey_start(const std::vector<double>& t, const std::vector<double>& p, double floor) {
  const std::size_t n = t.size();
  double mean = 0;
  for (double v : p) mean += v;
  mean /= static_cast<double>(n);
  const double span = t.back() - t.front();
  const double nyquist = std::numbers::pi * static_cast<double>(n - 1) / span;

  // Periodogram on a grid 8x finer than the natural resolution.
  const std::size_t n_freq = 8 * n;
  double best_power = -1, best_w = 0, best_phase = 0;
  for (std::size_t k = 1; k <= n_freq; ++k) {
    const double w = nyquist * static_cast<double>(k) / static_cast<double>(n_freq);
    std::complex<double> acc{};
    for (std::size_t i = 0; i < n; ++i) acc += (p[i] - mean) * std::polar(1.0, -w * t[i]);
    if (std::norm(acc) > best_power) {
      best_power = std::norm(acc);
      best_w = w;
      best_phase = std::arg(acc);
    }
  }
  // Amplitude of 2p - 1 is small compared to the offset when there is no
  // oscillation; fall back to a pure decay.
  double amp = 0;
  for (double v : p) amp = std::max(amp, std::abs(2 * v - 1));
  const bool oscillates = best_power > 0 && 2 * std::sqrt(best_power) / static_cast<double>(n) > 4 * floor;
  RamseyStart s{1 / span, oscillates ? best_w : 0.0, oscillates ? best_phase : 0.0};

  std::vector<double> xs, zs;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = std::cos(s.detuning * t[i] + s.phase);
    const double v = 2 * p[i] - 1;
    if (std::abs(c) > 0.5 && std::abs(v) > 3 * floor && v * c > 0) {
      xs.push_back(t[i]);
      zs.push_back(std::log(std::abs(v / c)));
    }
  }
  if (xs.size() >= 2) {
    double mx = 0, mz = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      mz += zs[i];
    }
    mx /= static_cast<double>(xs.size());
    mz /= static_cast<double>(xs.size());
    double sxx = 0, sxz = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxz += (xs[i] - mx) * (zs[i] - mz);
    }
    if (sxx > 0) s.gamma2 = std::max(-sxz / sxx, 0.0);
  }
  return s;
}

}  // namespace

Gamma2Estimate extract_gamma2(const RamseyTrace& trace) {
  const auto& t = trace.delays;
  const auto& p = trace.excited_probability;
  if (t.size() != p.size()) throw DomainError("Ramsey trace sequences differ in length");
  if (t.size() < 4) throw DomainError("Ramsey fit needs at least 4 delays");
  if (!std::is_sorted(t.begin(), t.end()) || !(t.back() > t.front()))
    throw DomainError("Ramsey delays must increase");
  for (double v : p)
    if (!(v >= 0 && v <= 1)) throw DomainError("Ramsey probabilities must lie in [0, 1]");

  const std::size_t n = t.size();
  const double shots = static_cast<double>(trace.shots_per_point);
  const double floor = trace.shots_per_point > 0 ? 0.5 / std::sqrt(shots) : 1e-3;
  const RamseyStart start = ramsey_start(t, p, floor);
  const double span = t.back() - t.front();

  using Vec = Eigen::VectorXd;
  auto model = [&](const Vec& x, double ti) { return ramsey_probability(x[0], x[1], ti, x[2]); };
  Vec weights = Vec::Ones(static_cast<Eigen::Index>(n));
  auto residual = [&](const Vec& x) {
    Vec r(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
      r[static_cast<Eigen::Index>(i)] = (p[i] - model(x, t[i])) * weights[static_cast<Eigen::Index>(i)];
    return r;
  };

  Vec x0(3);
  x0 << start.gamma2, start.detuning, start.phase;
  Vec scale(3);
  scale << std::max(start.gamma2, 1 / span), std::max(start.detuning, 1 / span), 1.0;
  LmOptions options;
  options.max_iterations = 500;

  LeastSquaresResult<double> fit = levenberg_marquardt<double>(residual, x0, scale, options);
  if (trace.shots_per_point > 0) {
    // Second pass with binomial weights from the first-pass model.
    for (std::size_t i = 0; i < n; ++i) {
      const double m = std::clamp(model(fit.params, t[i]), 0.0, 1.0);
      const double var = std::max(m * (1 - m), 1 / shots) / shots;
      weights[static_cast<Eigen::Index>(i)] = 1 / std::sqrt(var);
    }
    fit = levenberg_marquardt<double>(residual, fit.params, scale, options);
  }
  if (!fit.converged || !fit.params.allFinite())
    throw FitError("Ramsey fit did not converge after " + std::to_string(fit.iterations) +
                   " iterations (cost " + std::to_string(fit.cost) + ", start gamma2 " +
                   std::to_string(start.gamma2) + " 1/s)");

  Gamma2Estimate out;
  out.gamma2 = fit.params[0];
  out.detuning = fit.params[1];
  out.phase = fit.params[2];
  out.cost = fit.cost;
  out.iterations = fit.iterations;
  double var = fit.covariance(0, 0);
  if (trace.shots_per_point == 0 && n > 3) var *= fit.cost / static_cast<double>(n - 3);
  out.sigma = std::sqrt(std::max(var, 0.0));
  if (out.detuning < 0) {
    out.detuning = -out.detuning;
    out.phase = -out.phase;
  }
  out.phase = std::remainder(out.phase, 2 * std::numbers::pi);
  if (out.gamma2 * span < 2) out.warnings.push_back("Ramsey trace spans fewer than 2 decay constants");
  return out;
}

Snr2Estimate estimate_snr2(std::span<const ShotRecord> ground, std::span<const ShotRecord> excited,
                           const IntegrationWindow& window, double t1) {
  if (ground.size() < 2 || excited.size() < 2) throw DomainError("SNR estimate needs at least 2 shots per state");
  if (!(t1 > 0)) throw DomainError("T1 must be positive");
  if (!(window.length() > 0)) throw DomainError("integration window must have positive length");
  auto moments = [](std::span<const ShotRecord> s) {
    double mean = 0;
    for (const auto& r : s) mean += r.integrated_signal;
    mean /= static_cast<double>(s.size());
    double var = 0;
    for (const auto& r : s) var += (r.integrated_signal - mean) * (r.integrated_signal - mean);
    var /= static_cast<double>(s.size() - 1);
    return std::pair{mean, var};
  };
  const auto [mean_g, var_g] = moments(ground);
  const auto [mean_e, var_e] = moments(excited);
  if (!(var_g > 0)) throw DomainError("ground-state records have zero variance");

  // Mean time spent in e over the window, divided by the window length.
  const double survival =
      std::isinf(t1) ? 1.0
                     : t1 * (std::exp(-window.start / t1) - std::exp(-window.end / t1)) / window.length();
  const double n_g = static_cast<double>(ground.size());
  const double n_e = static_cast<double>(excited.size());
  const double sep = (mean_g - mean_e) / survival;
  const double var_sep = (var_g / n_g + var_e / n_e) / (survival * survival);
  const double sep2 = sep * sep - var_sep;  // unbiased

  Snr2Estimate out;
  out.separation = sep;
  out.ground_variance = var_g;
  out.snr2 = sep2 / (2 * var_g);
  // var(sep^2) ~ 4 sep^2 var_sep + 2 var_sep^2; var(var_g) ~ 2 var_g^2 / (n - 1).
  const double var_sep2 = 4 * sep * sep * var_sep + 2 * var_sep * var_sep;
  const double rel_var_g = 2 / (n_g - 1);
  out.sigma = std::sqrt(var_sep2 / (4 * var_g * var_g) + out.snr2 * out.snr2 * rel_var_g);
  return out;
}

EfficiencyEstimate extract_efficiency(const FitInputs& gamma2_vs_alpha2, const FitInputs& gamma_m_vs_alpha2,
                                      const DispersiveParams<>& d) {
  d.validate();
  auto range = [](const std::vector<double>& x) {
    if (x.empty()) throw DomainError("efficiency fit inputs are empty");
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return std::pair{*lo, *hi};
  };
  const auto [lo2, hi2] = range(gamma2_vs_alpha2.x);
  const auto [lom, him] = range(gamma_m_vs_alpha2.x);
  if (std::max(lo2, lom) >= std::min(hi2, him))
    throw InconsistencyError("Ramsey and SNR datasets do not span overlapping alpha2 ranges");

  EfficiencyEstimate out;
  out.gamma2_fit = weighted_linear_fit(gamma2_vs_alpha2.x, gamma2_vs_alpha2.y, gamma2_vs_alpha2.sigma);
  out.gamma_m_fit = weighted_linear_fit(gamma_m_vs_alpha2.x, gamma_m_vs_alpha2.y, gamma_m_vs_alpha2.sigma);
  out.gamma_phi_slope = out.gamma2_fit.slope;
  out.gamma_m_slope = out.gamma_m_fit.slope;
  out.model_dephasing_slope = 2 * lorentzian_factor(d);
  if (!(out.gamma_phi_slope > 0))
    throw InconsistencyError("fitted dephasing slope is not positive (" + std::to_string(out.gamma_phi_slope) +
                             " 1/s per photon)");
  out.eta_m = out.gamma_m_slope / out.gamma_phi_slope;
  const double rel_m = out.gamma_m_fit.sigma_slope() / out.gamma_m_slope;
  const double rel_phi = out.gamma2_fit.sigma_slope() / out.gamma_phi_slope;
  out.sigma_eta = std::abs(out.eta_m) * std::sqrt(rel_m * rel_m + rel_phi * rel_phi);
  return out;
}

NenvEstimate extract_n_env(double gamma2_intercept, double gamma1, const DispersiveParams<>& d,
                           double sigma_intercept) {
  d.validate();
  if (!(gamma1 >= 0)) throw DomainError("Gamma_1 must be non-negative");
  if (!(sigma_intercept >= 0)) throw DomainError("intercept uncertainty must be non-negative");
  const double excess = gamma2_intercept - gamma1 / 2;
  const double tolerance = 3 * sigma_intercept + 1e-12 * std::abs(gamma2_intercept);
  if (excess < -tolerance)
    throw InconsistencyError("Gamma_2 intercept " + std::to_string(gamma2_intercept) +
                             " 1/s lies below Gamma_1/2 = " + std::to_string(gamma1 / 2) + " 1/s");
  NenvEstimate out;
  out.sigma = sigma_intercept / lorentzian_factor(d);
  if (excess < 0) {
    out.clipped = true;
    out.n_env = 0;
  } else {
    out.n_env = n_env_from_dephasing(d, excess);
  }
  return out;
}

FidelityResult histogram_fidelity(std::span<const double> signal_g, std::span<const double> signal_e) {
  if (signal_g.empty() || signal_e.empty()) throw DomainError("fidelity needs shots for both states");
  std::vector<double> g(signal_g.begin(), signal_g.end());
  std::vector<double> e(signal_e.begin(), signal_e.end());
  std::sort(g.begin(), g.end());
  std::sort(e.begin(), e.end());
  double mean_g = 0, mean_e = 0;
  for (double v : g) mean_g += v;
  for (double v : e) mean_e += v;
  mean_g /= static_cast<double>(g.size());
  mean_e /= static_cast<double>(e.size());
  const bool g_above = mean_g >= mean_e;

  const double lo = std::min(g.front(), e.front());
  const double hi = std::max(g.back(), e.back());
  auto fraction_above = [](const std::vector<double>& s, double t) {
    const auto it = std::upper_bound(s.begin(), s.end(), t);
    return static_cast<double>(s.end() - it) / static_cast<double>(s.size());
  };
  auto evaluate = [&](double t) {
    const double g_up = fraction_above(g, t);
    const double e_up = fraction_above(e, t);
    FidelityResult r;
    r.threshold = t;
    r.p_e_given_g = g_above ? 1 - g_up : g_up;
    r.p_g_given_e = g_above ? e_up : 1 - e_up;
    r.fidelity = 1 - r.p_e_given_g - r.p_g_given_e;
    return r;
  };

  FidelityResult best = evaluate(0.5 * (mean_g + mean_e));
  for (std::size_t k = 0; k < kThresholdCandidates; ++k) {
    const double t = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(kThresholdCandidates - 1);
    const FidelityResult r = evaluate(t);
    if (r.fidelity > best.fidelity) best = r;
  }
  return best;
}

FidelityResult histogram_fidelity(std::span<const ShotRecord> shots_g, std::span<const ShotRecord> shots_e) {
  std::vector<double> g, e;
  g.reserve(shots_g.size());
  e.reserve(shots_e.size());
  for (const auto& s : shots_g) g.push_back(s.integrated_signal);
  for (const auto& s : shots_e) e.push_back(s.integrated_signal);
  return histogram_fidelity(std::span<const double>(g), std::span<const double>(e));
}

namespace detail {

BootstrapResult summarize_bootstrap(const std::vector<double>& values, const std::vector<char>& ok) {
  BootstrapResult out;
  double sum = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (ok[i]) {
      ++out.successes;
      sum += values[i];
    } else {
      ++out.failures;
    }
  }
  if (out.successes < 2)
    throw FitError("bootstrap estimator failed on " + std::to_string(out.failures) + " of " +
                   std::to_string(values.size()) + " resamples");
  out.mean = sum / static_cast<double>(out.successes);
  double ss = 0;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (ok[i]) ss += (values[i] - out.mean) * (values[i] - out.mean);
  out.standard_error = std::sqrt(ss / static_cast<double>(out.successes - 1));
  return out;
}

}  // namespace detail

SweepAnalysis analyze_sweep(const SweepData& data, const DispersiveParams<>& d, const QubitSpec<>& q) {
  q.validate();
  if (data.ramsey.size() < 3) throw DomainError("sweep analysis needs at least 3 Ramsey points");
  if (data.shots.size() < 3) throw DomainError("sweep analysis needs at least 3 shot points");
  SweepAnalysis out;
  out.gamma2.resize(data.ramsey.size());
  parallel_for(data.ramsey.size(), [&](std::size_t i) { out.gamma2[i] = extract_gamma2(data.ramsey[i].trace); });

  FitInputs ramsey_fit, rate_fit;
  for (std::size_t i = 0; i < data.ramsey.size(); ++i) {
    out.alpha2.push_back(data.ramsey[i].alpha2);
    ramsey_fit.x.push_back(data.ramsey[i].alpha2);
    ramsey_fit.y.push_back(out.gamma2[i].gamma2);
    ramsey_fit.sigma.push_back(out.gamma2[i].sigma);
  }
  for (const auto& point : data.shots) {
    SnrPoint sp;
    sp.alpha2 = point.alpha2;
    sp.tau = point.tau;
    const IntegrationWindow window = integration_window(d, point.tau, data.discard_ring_up);
    sp.window = window.length();
    sp.snr2 = estimate_snr2(point.ground, point.excited, window, q.t1);
    sp.gamma_m = sp.snr2.snr2 / (4 * sp.window);
    sp.sigma_gamma_m = sp.snr2.sigma / (4 * sp.window);
    rate_fit.x.push_back(sp.alpha2);
    rate_fit.y.push_back(sp.gamma_m);
    rate_fit.sigma.push_back(sp.sigma_gamma_m);
    out.snr.push_back(sp);
  }
  out.efficiency = extract_efficiency(ramsey_fit, rate_fit, d);
  out.n_env = extract_n_env(out.efficiency.gamma2_fit.intercept, q.gamma1(), d,
                            out.efficiency.gamma2_fit.sigma_intercept());
  return out;
}

}  // namespace readout
