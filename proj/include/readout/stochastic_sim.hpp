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

#ifndef READOUT_STOCHASTIC_SIM_HPP
#define READOUT_STOCHASTIC_SIM_HPP

// Monte Carlo generation of Ramsey traces under measurement and of integrated
// single-shot readout records with relaxation during the window.
//
// Integrated records use vacuum-normalized units: a qubit in g (e) contributes
// +sqrt(Gamma_m) (-sqrt(Gamma_m)) per unit time and the white measurement
// noise has variance T/2 over an integration length T, so the two-state SNR
// over the window is sqrt(4 Gamma_m T) with Gamma_m = eta_m Gamma_phi^m.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "readout/dephasing.hpp"
#include "readout/random.hpp"
#include "readout/units.hpp"

namespace readout {

enum class QubitState { g, e };

struct ShotRecord {
  QubitState prepared{QubitState::g};
  double integrated_signal{};
  std::optional<double> decay_time;  // relaxation time within [0, tau], if any
};

/// Part of [0, tau] that is integrated. With ring-up discarding the first
/// 2/kappa are dropped while the cavity field settles.
struct IntegrationWindow {
  double start{};
  double end{};
  double length() const { return end - start; }
};

IntegrationWindow integration_window(const DispersiveParams<>& d, double tau, bool discard_ring_up);

struct ShotOptions {
  bool discard_ring_up{true};
  std::string stream{"shots"};
};

/// Records are produced in blocks of kShotBlock; block b draws from stream
/// (seed, stream + state, b), which fixes every shot independently of threads.
inline constexpr std::size_t kShotBlock = 4096;

std::vector<ShotRecord> simulate_shots(const DispersiveParams<>& d, const QubitSpec<>& q,
                                       const MeasurementConfig<>& m, double eta_m, QubitState prepared,
                                       std::size_t n_shots, const SeedSpec& seed, const ShotOptions& options = {});

struct RamseyTrace {
  std::vector<double> delays;               // s
  std::vector<double> excited_probability;  // sampled frequencies in [0, 1]
  std::size_t shots_per_point{};
  double detuning{};                        // rad/s, the applied Ramsey detuning
};

/// p(t) = (1 + exp(-gamma2 t) cos(detuning t + phase)) / 2.
double ramsey_probability(double gamma2, double detuning, double t, double phase = 0.0);

/// Gamma_2 for a measurement of strength alpha2 during the Ramsey delay.
double expected_gamma2(const DispersiveParams<>& d, const QubitSpec<>& q, double alpha2);

struct RamseyOptions {
  double detuning{units::mhz(0.5)};
  std::string stream{"ramsey"};
};

RamseyTrace simulate_ramsey(const DispersiveParams<>& d, const QubitSpec<>& q, const MeasurementConfig<>& m,
                            std::span<const double> delays, std::size_t shots_per_point, const SeedSpec& seed,
                            const RamseyOptions& options = {});

struct SweepPlan {
  std::vector<double> alpha2_grid;
  std::vector<double> tau_grid;  // s
  std::size_t shots_per_state{10000};
  std::size_t ramsey_shots_per_point{10000};
  std::size_t ramsey_points{61};
  double ramsey_span{3.0};  // delay span in units of the expected 1/Gamma_2
  double ramsey_detuning{units::mhz(0.5)};
  bool discard_ring_up{true};
  std::string stream{"sweep"};
};

struct RamseyPoint {
  double alpha2{};
  double gamma2_true{};
  RamseyTrace trace;
};

struct ShotPoint {
  double alpha2{};
  double tau{};
  std::vector<ShotRecord> ground;
  std::vector<ShotRecord> excited;
};

struct SweepData {
  std::vector<RamseyPoint> ramsey;  // one per alpha2
  std::vector<ShotPoint> shots;     // alpha2-major, tau-minor
  bool discard_ring_up{true};
};

/// Synthetic Ramsey and readout datasets over a grid of measurement strengths.
/// Each Ramsey trace spans ramsey_span expected decay constants and uses a
/// detuning of at least 4 Gamma_2 so it oscillates visibly.
SweepData sweep_measurement_strength(const DispersiveParams<>& d, const QubitSpec<>& q,
                                     const MeasurementConfig<>& m_template, double eta_m, const SweepPlan& plan,
                                     const SeedSpec& seed);

}  // namespace readout

#endif  // READOUT_STOCHASTIC_SIM_HPP
