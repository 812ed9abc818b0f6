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

#include "readout/network_presets.hpp"

#include <cmath>
#include <vector>
#include <limits>

#include "readout/errors.hpp"
#include "readout/lorentzian_fit.hpp"

namespace readout {

NetworkSpec circulator_network(const CirculatorDesign& design) {
  NetworkSpec net;
  const char* labels[3] = {"a", "b", "c"};
  for (int i = 0; i < 3; ++i) net.modes.push_back({labels[i], design.omegas[i], design.kappa, 0.0});
  const double g = design.kappa / 2;
  net.drives = {
      {DriveKind::conversion, "a", "b", g, wrap_phase(design.loop_phase), std::nullopt},
      {DriveKind::conversion, "b", "c", g, 0.0, std::nullopt},
      {DriveKind::conversion, "c", "a", g, 0.0, std::nullopt},
  };
  net.probe_port = "a";
  return net;
}

NetworkSpec directional_amplifier_network(const DirectionalAmplifierDesign& d) {
  NetworkSpec net;
  net.modes = {
      {kCavity, d.cavity_omega + d.cavity_shift, d.cavity_weak_port, d.cavity_loss},
      {kInput, d.cavity_omega, 0.0, d.input_loss},
      {kOutput, d.output_omega, d.output_kappa, 0.0},
      {kAmplifier, d.amplifier_omega, 0.0, d.amplifier_loss},
  };
  const double g_cavity = std::sqrt(d.cavity_kappa_eff * d.input_kappa_eff) / 2;
  const double g_in_out = std::sqrt(d.input_kappa_eff * d.output_kappa) / 2;
  const double g_out_amp = std::sqrt(d.amplifier_kappa_eff * d.output_kappa) / 2;
  // Direct amp <-> input coupling equal to the output-mediated one cancels
  // the reverse path at the isolating loop phase.
  const double g_amp_in = 2 * g_in_out * g_out_amp / d.output_kappa;
  net.drives = {
      // Static coupling through the connecting line: no pump.
      {DriveKind::conversion, kCavity, kInput, g_cavity, 0.0, 0.0},
      {DriveKind::conversion, kInput, kOutput, g_in_out, wrap_phase(d.loop_phase), std::nullopt},
      {DriveKind::conversion, kOutput, kAmplifier, g_out_amp, 0.0, std::nullopt},
      {DriveKind::conversion, kAmplifier, kInput, g_amp_in, 0.0, std::nullopt},
      {DriveKind::gain, kAmplifier, kAmplifier, d.gain_strength, wrap_phase(d.gain_phase), std::nullopt},
  };
  net.probe_port = kOutput;
  return net;
}

double quadrature_gain_db(const NetworkSpec& network, std::string_view port) {
  const CoupledModeNetwork net(network);
  const std::size_t p = net.port_index(port);
  const auto s = net.scattering_at_detuning(0.0);
  const double amp = std::abs(s.signal(p, p)) + std::abs(s.idler(p, p));
  return 20.0 * std::log10(amp);
}

double cavity_linewidth(const DirectionalAmplifierDesign& design) {
  const NetworkSpec net = directional_amplifier_network(design);
  const double span = 12.0 * design.cavity_kappa_eff;
  std::vector<double> freqs(801);
  for (std::size_t i = 0; i < freqs.size(); ++i)
    freqs[i] = design.cavity_omega + design.cavity_shift - span + 2 * span * static_cast<double>(i) / 800.0;
  const auto trace = reflection_trace(net, kCavity, freqs);
  return effective_linewidth(trace, freqs).kappa;
}

DirectionalAmplifierDesign calibrate_directional_amplifier(DirectionalAmplifierDesign design,
                                                           double target_gain_db, double target_cavity_kappa) {
  if (!(target_cavity_kappa > 0)) throw DomainError("target cavity linewidth must be positive");
  auto gain_at = [&](double g) {
    DirectionalAmplifierDesign trial = design;
    trial.gain_strength = g;
    const NetworkSpec net = directional_amplifier_network(trial);
    if (CoupledModeNetwork(net).stability_margin() >= -1e-9 * trial.output_kappa) return std::numeric_limits<double>::infinity();
    return quadrature_gain_db(net, kOutput);
  };

  for (int outer = 0; outer < 20; ++outer) {
    // Quadrature gain grows monotonically with the pump up to threshold.
    double lo = 0.0, hi = design.amplifier_kappa_eff;
    if (gain_at(lo) > target_gain_db) throw DomainError("target gain is below the unpumped transmission");
    while (gain_at(hi) < target_gain_db) hi *= 2;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
      const double mid = (lo + hi) / 2;
      (gain_at(mid) < target_gain_db ? lo : hi) = mid;
    }
    design.gain_strength = lo;

    const double fitted = cavity_linewidth(design);
    const double ratio = target_cavity_kappa / fitted;
    if (std::abs(ratio - 1) < 1e-7) return design;
    design.cavity_kappa_eff *= ratio;
  }
  throw FitError("directional amplifier calibration did not converge");
}

}  // namespace readout
