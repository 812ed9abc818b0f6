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

#ifndef READOUT_ESTIMATION_HPP
#define READOUT_ESTIMATION_HPP

// Analysis of synthetic or measured readout data: linear fits, Ramsey decay
// fits, SNR and measurement-rate estimates, efficiency and occupancy
// extraction, threshold fidelity and bootstrap errors.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "readout/dephasing.hpp"
#include "readout/errors.hpp"
#include "readout/parallel.hpp"
#include "readout/random.hpp"
#include "readout/stochastic_sim.hpp"

namespace readout {

struct LinearFitResult {
  double slope{};
  double intercept{};
  Eigen::Matrix2d covariance{Eigen::Matrix2d::Zero()};  // (slope, intercept)
  double r_squared{};
  double chi_squared{};

  double sigma_slope() const { return std::sqrt(covariance(0, 0)); }
  double sigma_intercept() const { return std::sqrt(covariance(1, 1)); }
};

/// Closed-form weighted least squares y = slope * x + intercept with weights
/// 1 / sigma_y^2. The covariance treats sigma_y as absolute errors.
LinearFitResult weighted_linear_fit(std::span<const double> x, std::span<const double> y,
                                    std::span<const double> sigma_y);

/// Points for a linear fit with their y uncertainties.
struct FitInputs {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> sigma;
};

struct Gamma2Estimate {
  double gamma2{};
  double sigma{};
  double detuning{};  // fitted oscillation frequency, rad/s
  double phase{};
  double cost{};
  int iterations{};
  std::vector<std::string> warnings;
};

/// Fits p(t) = (1 + exp(-gamma2 t) cos(detuning t + phase)) / 2. Detuning and
/// phase start at the periodogram peak of the demeaned trace and gamma2 at a
/// log-envelope regression. Points are weighted by binomial errors of the
/// fitted model when shots_per_point is set; otherwise the covariance is
/// rescaled by the residual variance.
Gamma2Estimate extract_gamma2(const RamseyTrace& trace);

struct Snr2Estimate {
  double snr2{};
  double sigma{};
  double separation{};       // corrected mean separation over the window
  double ground_variance{};
};

/// Two-state SNR^2 for records integrated over `window`. Relaxation during the
/// window shrinks the excited mean by a known factor for a known T1; the
/// separation is rescaled by it and the unbiased squared separation is used,
/// so that E[snr2] = 4 Gamma_m T for the window length T. The ground-state
/// variance stands for both states since relaxation broadens only the excited
/// distribution.
Snr2Estimate estimate_snr2(std::span<const ShotRecord> ground, std::span<const ShotRecord> excited,
                           const IntegrationWindow& window, double t1);

struct EfficiencyEstimate {
  double eta_m{};
  double sigma_eta{};
  double gamma_m_slope{};    // 1/s per photon
  double gamma_phi_slope{};  // 1/s per photon, from the Gamma_2 fit
  double model_dephasing_slope{};
  LinearFitResult gamma2_fit;
  LinearFitResult gamma_m_fit;
};

/// eta_m = slope(Gamma_m vs alpha2) / slope(Gamma_2 vs alpha2). The Gamma_2
/// intercept absorbs Gamma_1 / 2 and the environmental dephasing.
EfficiencyEstimate extract_efficiency(const FitInputs& gamma2_vs_alpha2, const FitInputs& gamma_m_vs_alpha2,
                                      const DispersiveParams<>& d);

struct NenvEstimate {
  double n_env{};
  double sigma{};
  bool clipped{};  // raw estimate was negative within noise and set to 0
};

/// n_env from the alpha2 = 0 intercept of Gamma_2 and an independently known
/// Gamma_1. Negative estimates within 3 sigma are clipped to zero.
NenvEstimate extract_n_env(double gamma2_intercept, double gamma1, const DispersiveParams<>& d,
                           double sigma_intercept = 0.0);

struct FidelityResult {
  double fidelity{};
  double threshold{};
  double p_e_given_g{};
  double p_g_given_e{};
};

/// Best threshold among 512 evenly spaced points over the pooled signal range
/// plus the midpoint between the two sample means. The state with the larger
/// mean is assigned above the threshold.
FidelityResult histogram_fidelity(std::span<const ShotRecord> shots_g, std::span<const ShotRecord> shots_e);
FidelityResult histogram_fidelity(std::span<const double> signal_g, std::span<const double> signal_e);

inline constexpr std::size_t kThresholdCandidates = 512;

struct BootstrapResult {
  double standard_error{};
  double mean{};
  std::size_t successes{};
  std::size_t failures{};
};

namespace detail {
BootstrapResult summarize_bootstrap(const std::vector<double>& values, const std::vector<char>& ok);
}

/// Nonparametric bootstrap of a one-sample statistic. Resample r draws from
/// stream (seed, label, r). Resamples on which the estimator throws or
/// returns a non-finite value are excluded and counted.
template <typename T, typename Estimator>
BootstrapResult bootstrap_uncertainty(Estimator estimator, std::span<const T> data, std::size_t n_resamples,
                                      const SeedSpec& seed, const std::string& label = "bootstrap") {
  if (n_resamples < 100) throw DomainError("bootstrap needs at least 100 resamples");
  if (data.empty()) throw DomainError("bootstrap needs data");
  std::vector<double> values(n_resamples);
  std::vector<char> ok(n_resamples, 0);
  parallel_for(n_resamples, [&](std::size_t r) {
    Engine engine = make_engine(seed, label, r);
    std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
    std::vector<T> sample(data.size());
    for (auto& s : sample) s = data[pick(engine)];
    try {
      values[r] = estimator(std::span<const T>(sample));
      ok[r] = std::isfinite(values[r]) ? 1 : 0;
    } catch (const std::exception&) {
      ok[r] = 0;
    }
  });
  return detail::summarize_bootstrap(values, ok);
}

/// Two-sample variant; both samples are resampled independently.
template <typename T, typename Estimator>
BootstrapResult bootstrap_uncertainty(Estimator estimator, std::span<const T> first, std::span<const T> second,
                                      std::size_t n_resamples, const SeedSpec& seed,
                                      const std::string& label = "bootstrap") {
  if (n_resamples < 100) throw DomainError("bootstrap needs at least 100 resamples");
  if (first.empty() || second.empty()) throw DomainError("bootstrap needs data");
  std::vector<double> values(n_resamples);
  std::vector<char> ok(n_resamples, 0);
  parallel_for(n_resamples, [&](std::size_t r) {
    Engine engine = make_engine(seed, label, r);
    auto draw = [&](std::span<const T> src) {
      std::uniform_int_distribution<std::size_t> pick(0, src.size() - 1);
      std::vector<T> sample(src.size());
      for (auto& s : sample) s = src[pick(engine)];
      return sample;
    };
    const auto a = draw(first);
    const auto b = draw(second);
    try {
      values[r] = estimator(std::span<const T>(a), std::span<const T>(b));
      ok[r] = std::isfinite(values[r]) ? 1 : 0;
    } catch (const std::exception&) {
      ok[r] = 0;
    }
  });
  return detail::summarize_bootstrap(values, ok);
}

struct SnrPoint {
  double alpha2{};
  double tau{};
  double window{};  // integrated length, s
  Snr2Estimate snr2;
  double gamma_m{};
  double sigma_gamma_m{};
};

struct SweepAnalysis {
  std::vector<double> alpha2;             // Ramsey grid
  std::vector<Gamma2Estimate> gamma2;     // one per Ramsey alpha2
  std::vector<SnrPoint> snr;              // one per shot point
  EfficiencyEstimate efficiency;
  NenvEstimate n_env;
};

/// Full extraction from a measurement-strength sweep. T1 is taken as known
/// from an independent measurement; it enters the SNR relaxation correction
/// and the n_env extraction.
SweepAnalysis analyze_sweep(const SweepData& data, const DispersiveParams<>& d, const QubitSpec<>& q);

}  // namespace readout

#endif  // READOUT_ESTIMATION_HPP
