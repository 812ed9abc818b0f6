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

#ifndef READOUT_NETWORK_PRESETS_HPP
#define READOUT_NETWORK_PRESETS_HPP

// Reference networks: a three-mode parametric circulator and the four-mode
// cavity + directional phase-sensitive amplifier. Drive strengths follow
// from matching conditions and target gain rather than from pump powers.

#include <array>
#include <numbers>

#include "readout/coupled_mode.hpp"
#include "readout/units.hpp"

namespace readout {

struct CirculatorDesign {
  std::array<double, 3> omegas{units::ghz(6.912), units::ghz(8.013), units::ghz(10.929)};
  double kappa{units::mhz(20.0)};  // external linewidth of every mode
  double loop_phase{std::numbers::pi / 2};
};

/// Modes "a", "b", "c" with external ports, matched conversion g = sqrt(k_i k_j)/2
/// on every pair; the loop phase a -> b -> c -> a sits on the a-b drive.
NetworkSpec circulator_network(const CirculatorDesign& design);

inline constexpr const char* kCavity = "cavity";
inline constexpr const char* kInput = "input";
inline constexpr const char* kOutput = "output";
inline constexpr const char* kAmplifier = "amp";

/// Readout cavity statically coupled to the FPJA input mode, which is
/// converted to the output mode and to the degenerately pumped amplification
/// mode; output <-> amplifier conversion closes the loop
/// input -> output -> amp -> input. At the isolating loop phase the
/// amp -> input path cancels, so amplified noise does not reach the cavity
/// and the cavity linewidth comes from conversion toward the output port.
struct DirectionalAmplifierDesign {
  double cavity_omega{units::ghz(10.929)};
  double output_omega{units::ghz(6.912)};
  double amplifier_omega{units::ghz(8.013)};

  double output_kappa{units::mhz(50.0)};         // output mode external coupling
  double input_kappa_eff{units::mhz(20.0)};      // conversion-induced damping of the input mode
  double amplifier_kappa_eff{units::mhz(10.0)};  // conversion-induced damping of the amplifier mode
  double cavity_kappa_eff{units::mhz(2.58)};     // adiabatic estimate; see calibrate_directional_amplifier

  double cavity_weak_port{units::mhz(0.05)};
  double cavity_loss{units::mhz(0.01)};
  double input_loss{units::mhz(0.05)};
  double amplifier_loss{units::mhz(0.2)};

  double gain_strength{0.0};  // degenerate gain g on the amplifier mode (rad/s)
  double gain_phase{0.0};
  double loop_phase{isolating_loop_phase};
  double cavity_shift{0.0};   // dispersive offset of the cavity (+chi or -chi)

  static constexpr double isolating_loop_phase = 3 * std::numbers::pi / 2;
};

NetworkSpec directional_amplifier_network(const DirectionalAmplifierDesign& design);

/// Amplified-quadrature power gain (|S_s| + |S_i|)^2 of the output port on resonance, in dB.
double quadrature_gain_db(const NetworkSpec& network, std::string_view port);

/// Lorentzian linewidth of the cavity seen from its weak port.
double cavity_linewidth(const DirectionalAmplifierDesign& design);

/// Adjusts gain_strength and cavity_kappa_eff so the output-port quadrature
/// gain and the fitted cavity linewidth hit their targets.
DirectionalAmplifierDesign calibrate_directional_amplifier(DirectionalAmplifierDesign design,
                                                           double target_gain_db, double target_cavity_kappa);

}  // namespace readout

#endif  // READOUT_NETWORK_PRESETS_HPP
