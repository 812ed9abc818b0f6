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

#ifndef READOUT_DEPHASING_HPP
#define READOUT_DEPHASING_HPP

// Closed-form dispersive measurement theory: photon-number dephasing,
// decoherence budget, SNR and measurement-rate algebra, efficiencies and an
// analytic single-shot fidelity model.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "readout/errors.hpp"

namespace readout {

/// Dispersive coupling of a qubit to its readout cavity. `chi` is half the
/// total state-dependent splitting; the cavity sits at omega_r + chi (g) or
/// omega_r - chi (e).
template <typename Real = double>
struct DispersiveParams {
  Real chi{};
  Real kappa{};
  Real omega_r{};

  void validate() const {
    if (!(chi > 0)) throw DomainError("dispersive shift chi must be positive");
    if (!(kappa > 0)) throw DomainError("cavity linewidth kappa must be positive");
  }

  /// Builds parameters from the total splitting 2*chi (rad/s).
  static DispersiveParams from_total_splitting(Real two_chi, Real kappa, Real omega_r = Real{}) {
    return {two_chi / 2, kappa, omega_r};
  }
};

template <typename Real = double>
struct QubitSpec {
  Real omega_q{};
  Real t1{std::numeric_limits<Real>::infinity()};
  Real n_env{};

  void validate() const {
    if (!(t1 > 0)) throw DomainError("T1 must be positive");
    if (!(n_env >= 0)) throw DomainError("n_env must be non-negative");
  }
  Real gamma1() const { return std::isinf(t1) ? Real{0} : Real{1} / t1; }
};

template <typename Real = double>
struct MeasurementConfig {
  Real alpha2{};  // mean coherent photon number |alpha|^2
  Real tau{};     // integration time (s)
  Real gain_fpja_db{};
  Real gain_jpa_db{};

  void validate() const {
    if (!(alpha2 >= 0)) throw DomainError("alpha2 must be non-negative");
    if (!(tau > 0)) throw DomainError("integration time tau must be positive");
  }
};

/// 4 chi^2 kappa / (4 chi^2 + kappa^2): dephasing rate per cavity quantum.
template <typename Real>
Real lorentzian_factor(const DispersiveParams<Real>& d) {
  const Real four_chi2 = 4 * d.chi * d.chi;
  return four_chi2 * d.kappa / (four_chi2 + d.kappa * d.kappa);
}

template <typename Real>
Real dephasing_env(const DispersiveParams<Real>& d, Real n_env) {
  d.validate();
  return lorentzian_factor(d) * n_env;
}

template <typename Real>
Real dephasing_meas(const DispersiveParams<Real>& d, Real alpha2) {
  d.validate();
  if (!(alpha2 >= 0)) throw DomainError("alpha2 must be non-negative");
  return 2 * lorentzian_factor(d) * alpha2;
}

/// Gamma_2 = Gamma_1 / 2 + Gamma_phi^env + Gamma_phi^m.
template <typename Real>
Real total_decoherence(Real gamma1, Real gamma_phi_env, Real gamma_phi_m) {
  if (gamma1 < 0 || gamma_phi_env < 0 || gamma_phi_m < 0)
    throw DomainError("decoherence rates must be non-negative");
  return gamma1 / 2 + gamma_phi_env + gamma_phi_m;
}

/// Thermal occupancy implied by an excess dephasing rate (inverse of dephasing_env).
template <typename Real>
Real n_env_from_dephasing(const DispersiveParams<Real>& d, Real gamma_phi_env) {
  d.validate();
  return gamma_phi_env / lorentzian_factor(d);
}

template <typename Real>
Real snr_from_stats(Real mean_g, Real mean_e, Real sigma_g, Real sigma_e) {
  if (!(sigma_g > 0) || !(sigma_e > 0))
    throw DomainError("SNR needs strictly positive standard deviations");
  const Real diff = mean_g - mean_e;
  return std::sqrt(diff * diff / (sigma_g * sigma_g + sigma_e * sigma_e));
}

/// Gamma_m = SNR^2 / (4 tau).
template <typename Real>
Real measurement_rate(Real snr, Real tau) {
  if (!(tau > 0)) throw DomainError("integration time must be positive");
  return snr * snr / (4 * tau);
}

/// Ratio Gamma_m / Gamma_phi^m. Values above one are returned as-is; they
/// signal inputs that are not mutually consistent.
template <typename Real = double>
struct MeasurementEfficiency {
  Real value{};
  bool exceeds_unity() const { return value > 1; }
};

template <typename Real>
MeasurementEfficiency<Real> efficiency_meas(Real gamma_m, Real gamma_phi_m) {
  if (!(gamma_phi_m > 0)) throw DomainError("measurement-induced dephasing must be positive");
  return {gamma_m / gamma_phi_m};
}

/// eta_env = 1 / (1 + 2 n_env).
template <typename Real>
Real efficiency_env(Real n_env) {
  if (!(n_env >= 0)) throw DomainError("n_env must be non-negative");
  return 1 / (1 + 2 * n_env);
}

template <typename Real>
Real n_env_from_efficiency(Real eta_env) {
  if (!(eta_env > 0 && eta_env <= 1)) throw DomainError("eta_env must lie in (0, 1]");
  return (1 / eta_env - 1) / 2;
}

template <typename Real = double>
struct FidelityPrediction {
  Real fidelity{};
  Real p_e_given_g{};
  Real p_g_given_e{};
  Real threshold{};  // in units of the single-state standard deviation, g mean at +snr/sqrt(2)
  Real snr{};
  Real relaxation_error{};
  std::vector<std::string> warnings;
};

namespace detail {
template <typename Real>
Real normal_cdf(Real x) {
  return std::erfc(-x / std::sqrt(Real{2})) / 2;
}
}  // namespace detail

/// Analytic readout fidelity F = 1 - P(e|g) - P(g|e).
///
/// The integrated record for each state is Gaussian with unit width and the
/// two means are separated by sqrt(2) * SNR, SNR^2 = 4 eta_m Gamma_phi^m tau.
/// An excited qubit that relaxes within tau_eff = tau + 2/kappa (integration
/// plus cavity ring-up) is counted as reading like the ground state, so
/// 1 - exp(-tau_eff / T1) is an upper estimate of the relaxation error. The
/// threshold is the fidelity maximum of a scan between the two means with a
/// step of 1e-3 standard deviations.
template <typename Real>
FidelityPrediction<Real> fidelity_model(const DispersiveParams<Real>& d, const QubitSpec<Real>& q,
                                        const MeasurementConfig<Real>& m, Real eta_m) {
  d.validate();
  q.validate();
  m.validate();
  if (!(eta_m > 0 && eta_m <= 1)) throw DomainError("eta_m must lie in (0, 1]");

  FidelityPrediction<Real> out;
  if (m.tau * d.kappa < 5)
    out.warnings.push_back("integration time is not long compared to 1/kappa");

  const Real gamma_phi_m = dephasing_meas(d, m.alpha2);
  out.snr = std::sqrt(4 * eta_m * gamma_phi_m * m.tau);
  const Real tau_eff = m.tau + 2 / d.kappa;
  out.relaxation_error = std::isinf(q.t1) ? Real{0} : -std::expm1(-tau_eff / q.t1);

  const Real half_sep = out.snr / std::sqrt(Real{2});  // means at +-half_sep, unit sigma
  const Real p_relax = out.relaxation_error;
  auto evaluate = [&](Real t) {
    const Real e_given_g = detail::normal_cdf(t - half_sep);
    const Real g_if_relaxed = 1 - detail::normal_cdf(t - half_sep);
    const Real g_if_excited = 1 - detail::normal_cdf(t + half_sep);
    const Real g_given_e = p_relax * g_if_relaxed + (1 - p_relax) * g_if_excited;
    return std::pair{e_given_g, g_given_e};
  };

  Real best_t = 0;
  auto [best_eg, best_ge] = evaluate(Real{0});
  if (half_sep > 0) {
    const Real step = Real{1e-3};
    const auto n_steps = static_cast<long>(std::ceil(2 * half_sep / step));
    for (long i = 0; i <= n_steps; ++i) {
      const Real t = std::min(-half_sep + static_cast<Real>(i) * step, half_sep);
      auto [eg, ge] = evaluate(t);
      if (1 - eg - ge > 1 - best_eg - best_ge) {
        best_t = t;
        best_eg = eg;
        best_ge = ge;
      }
    }
  }
  out.threshold = best_t;
  out.p_e_given_g = best_eg;
  out.p_g_given_e = best_ge;
  out.fidelity = 1 - best_eg - best_ge;
  return out;
}

}  // namespace readout

#endif  // READOUT_DEPHASING_HPP
