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

#ifndef READOUT_LORENTZIAN_FIT_HPP
#define READOUT_LORENTZIAN_FIT_HPP

#include <complex>
#include <span>

namespace readout {

/// Single-port reflection of one resonance on a complex background:
/// background * (1 - kappa_ext / (kappa/2 - i (omega - center))).
std::complex<double> lorentzian_reflection(double omega, double center, double kappa, double kappa_ext,
                                           std::complex<double> background = 1.0);

struct LinewidthFit {
  double kappa{};               // total linewidth (rad/s)
  double kappa_ext_fraction{};  // kappa_ext / kappa as seen from the probed port
  double center{};              // rad/s
  std::complex<double> background{1.0};
  double residual_norm{};       // Euclidean norm of the complex residuals
};

/// Least-squares Lorentzian fit of a complex reflection trace. The grid must
/// reach well outside the resonance so the endpoints fix the background.
/// Throws FitError when no feature stands out and AmbiguityError when the
/// trace shows more than one resonance.
LinewidthFit effective_linewidth(std::span<const std::complex<double>> trace, std::span<const double> freqs);

}  // namespace readout

#endif  // READOUT_LORENTZIAN_FIT_HPP
