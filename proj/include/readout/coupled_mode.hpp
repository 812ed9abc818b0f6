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

#ifndef READOUT_COUPLED_MODE_HPP
#define READOUT_COUPLED_MODE_HPP

// Frequency-domain input-output theory for parametrically coupled resonators.
//
// Every mode contributes two rows to the doubled basis: the annihilation
// component a[w] and the creation component (a[-w])^dagger, both expressed in
// the mode's rotating frame. Pumps sit at the sum or difference of their
// modes' frame frequencies so all couplings are static in those frames. With
// the time-domain equations
//
//   da/dt = -i delta a - kappa/2 a - i g e^{i phi} b - i g e^{i phi} c^dag + sqrt(kappa) a_in
//   a_out = a_in - sqrt(kappa) a
//
// the dynamics matrix is M(w) = A + i w and S(w) = I + K^T M(w)^-1 K.

#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace readout {

struct ModeSpec {
  std::string label;
  double omega{};      // rad/s
  double kappa_ext{};  // rad/s, coupling to the mode's external port
  double kappa_int{};  // rad/s, internal loss, modeled as a thermalized port

  double kappa() const { return kappa_ext + kappa_int; }
};

enum class DriveKind { conversion, gain };

struct DriveSpec {
  DriveKind kind{DriveKind::conversion};
  std::string mode_a;
  std::string mode_b;  // equal to mode_a for degenerate gain
  double strength{};   // coupling rate g (rad/s)
  double phase{};      // rad, in [0, 2 pi)
  // Pump frequency; by default |omega_a - omega_b| (conversion) or
  // omega_a + omega_b (gain), which keeps every mode on resonance in its frame.
  std::optional<double> pump_frequency;

  std::string describe() const;
};

struct NetworkSpec {
  std::vector<ModeSpec> modes;
  std::vector<DriveSpec> drives;
  std::string probe_port;  // label of the externally coupled mode that is driven and read

  std::size_t mode_index(std::string_view label) const;
  void validate() const;
};

/// Input/output channel: the external port of a mode or its fictitious loss port.
struct Port {
  std::string label;  // mode label, or mode label + ".loss"
  std::size_t mode{};
  double kappa{};
  bool loss{};
};

struct ScatteringResult {
  double frequency{};  // probe angular frequency at the reference port
  // Doubled basis: row/column 2p is the signal component of port p, 2p+1 the
  // conjugate (idler) component.
  Eigen::MatrixXcd s_matrix;
  std::vector<std::string> port_labels;

  std::size_t port_index(std::string_view label) const;
  std::complex<double> signal(std::size_t out, std::size_t in) const { return s_matrix(2 * out, 2 * in); }
  std::complex<double> idler(std::size_t out, std::size_t in) const { return s_matrix(2 * out, 2 * in + 1); }
};

/// Validated, immutable network with precomputed frames and port couplings.
class CoupledModeNetwork {
 public:
  explicit CoupledModeNetwork(NetworkSpec spec);

  const NetworkSpec& spec() const { return spec_; }
  const std::vector<Port>& ports() const { return ports_; }
  std::size_t port_index(std::string_view label) const;
  std::size_t mode_count() const { return spec_.modes.size(); }

  /// Rotating-frame frequency of a mode (rad/s).
  double frame_frequency(std::size_t mode) const { return frames_[mode]; }
  double max_linewidth() const;

  /// M at a common frame detuning (rad/s).
  Eigen::MatrixXcd dynamics_at_detuning(double detuning) const;
  /// M for an absolute probe frequency applied at the network's probe port.
  Eigen::MatrixXcd dynamics(double probe_freq) const;

  ScatteringResult scattering_at_detuning(double detuning) const;
  ScatteringResult scattering(double probe_freq) const;

  /// Largest real part of the eigenvalues of M; negative for a stable network.
  double stability_margin() const;
  void require_stable() const;

  /// Noise transfer -M^-1 K restricted to the two rows of `mode`.
  Eigen::MatrixXcd mode_response(std::size_t mode, double detuning) const;

  const Eigen::MatrixXd& port_coupling() const { return coupling_; }

 private:
  NetworkSpec spec_;
  std::vector<double> frames_;
  std::vector<Port> ports_;
  Eigen::MatrixXd coupling_;
  Eigen::MatrixXcd static_dynamics_;  // M at zero detuning
  double margin_{};
};

Eigen::MatrixXcd assemble_dynamics(const NetworkSpec& network, double probe_freq);

ScatteringResult scattering_matrix(const NetworkSpec& network, double probe_freq);

/// S_port,port over an absolute frequency grid around the port's mode.
std::vector<std::complex<double>> reflection_trace(const NetworkSpec& network,
                                                   std::string_view port,
                                                   std::span<const double> freqs);

/// Steady-state occupancy of `target_mode` (quanta, vacuum excluded) driven by
/// thermal baths on every port; `bath_occupations` maps port label to quanta.
double mode_occupancy_from_noise(const NetworkSpec& network, std::string_view target_mode,
                                 const std::map<std::string, double>& bath_occupations);

/// Same with every port at occupancy `n`.
double mode_occupancy_uniform_bath(const NetworkSpec& network, std::string_view target_mode, double n);

/// Sum of conversion-drive phases around a closed loop of mode labels,
/// wrapped to [0, 2 pi). Traversing a drive from mode_b to mode_a counts -phase.
double loop_phase(const NetworkSpec& network, std::span<const std::string> cycle);

double wrap_phase(double phase);

}  // namespace readout

#endif  // READOUT_COUPLED_MODE_HPP
