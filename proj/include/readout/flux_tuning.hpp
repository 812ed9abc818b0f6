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

#ifndef READOUT_FLUX_TUNING_HPP
#define READOUT_FLUX_TUNING_HPP

// Static spectroscopy: SQUID-tuned mode frequencies, a ladder of spurious
// standing-wave resonances, and the hybridized spectrum of the coupled set.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "readout/coupled_mode.hpp"

namespace readout {

struct FluxTuneParams {
  double omega_max{};        // zero-flux frequency (rad/s)
  double participation{1.0}; // tunable fraction, in (0, 1]
  double flux{};             // Phi / Phi_0
};

/// omega_max * (p sqrt|cos(pi flux)| + 1 - p) on the first branch |flux| < 1/2.
double squid_frequency(const FluxTuneParams& params);

/// Zero-flux frequency that puts the mode at `target` for the given flux.
double omega_max_for_resonance(double participation, double flux, double target);

/// Flux in [0, 1/2) where the mode reaches `target` (params.flux ignored).
double resonance_flux(const FluxTuneParams& params, double target);

struct SpuriousLadder {
  double fsr{};     // rad/s
  double anchor{};  // frequency of element 0 (rad/s)
  double kappa{};   // linewidth of every element (rad/s)
  // Coupling of element k (frequency anchor + k fsr) to every non-ladder mode;
  // elements without an entry use default_coupling.
  std::map<int, double> couplings;
  double default_coupling{};

  double coupling(int index) const;
  void validate() const;
};

struct LadderElement {
  int index{};
  double omega{};
};

/// Elements anchor + k fsr inside [lo, hi], ascending.
std::vector<double> ladder_frequencies(const SpuriousLadder& ladder, double lo, double hi);
std::vector<LadderElement> ladder_elements(const SpuriousLadder& ladder, double lo, double hi);

struct HybridSpectrum {
  Eigen::VectorXd eigenfrequencies;  // rad/s
  Eigen::VectorXd eigenlinewidths;   // rad/s
  // Row k: weight of each bare mode in eigenmode k, normalized to one.
  Eigen::MatrixXd participations;
  Eigen::MatrixXcd eigenvectors;     // column k is eigenmode k, unit norm
};

/// Eigenmodes of H = diag(omega_j - i kappa_j / 2) + G for symmetric G,
/// ordered by ascending eigenfrequency.
HybridSpectrum hybridized_spectrum(std::span<const ModeSpec> bare, const Eigen::MatrixXd& couplings);

struct TunableMode {
  std::string label;
  double omega_max{};
  double participation{1.0};
  double kappa_ext{};
  double kappa_int{};
};

struct SpectroscopyModel {
  std::vector<TunableMode> tunable;
  std::vector<ModeSpec> fixed;
  std::optional<SpuriousLadder> ladder;
  // Direct couplings between named tunable/fixed modes (rad/s).
  std::vector<std::pair<std::pair<std::string, std::string>, double>> couplings;
};

struct FluxSweep {
  std::vector<double> fluxes;
  std::vector<std::string> bare_labels;  // tunable, fixed, then ladder elements
  std::vector<HybridSpectrum> spectra;   // branch k keeps its identity across fluxes
};

/// Hybridized spectra over a flux grid. Branches are tracked by maximum
/// eigenvector overlap with the previous grid point; the first point is
/// ordered by frequency.
FluxSweep flux_sweep(const SpectroscopyModel& model, std::span<const double> fluxes);

}  // namespace readout

#endif  // READOUT_FLUX_TUNING_HPP
