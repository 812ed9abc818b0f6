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

#include "readout/coupled_mode.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

#include "readout/errors.hpp"
#include "readout/parallel.hpp"
#include "readout/quadrature.hpp"

namespace readout {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double nominal_pump(const DriveSpec& d, double omega_a, double omega_b) {
  if (d.pump_frequency) return *d.pump_frequency;
  return d.kind == DriveKind::conversion ? std::abs(omega_a - omega_b) : omega_a + omega_b;
}

// Frame offset along a conversion edge a -> b is +pump when omega_b >= omega_a.
double conversion_sign(double omega_a, double omega_b) { return omega_b >= omega_a ? 1.0 : -1.0; }

}  // namespace

double wrap_phase(double phase) {
  double p = std::fmod(phase, kTwoPi);
  if (p < 0) p += kTwoPi;
  if (p >= kTwoPi) p = 0.0;
  return p;
}

std::string DriveSpec::describe() const {
  const char* k = kind == DriveKind::conversion ? "conversion" : "gain";
  return std::string(k) + "(" + mode_a + "," + mode_b + ")";
}

std::size_t NetworkSpec::mode_index(std::string_view label) const {
  for (std::size_t i = 0; i < modes.size(); ++i)
    if (modes[i].label == label) return i;
  throw ConfigError("unknown mode '" + std::string(label) + "'");
}

void NetworkSpec::validate() const {
  if (modes.empty()) throw ConfigError("network has no modes");
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const auto& m = modes[i];
    if (m.label.empty()) throw ConfigError("mode label must not be empty");
    for (std::size_t j = 0; j < i; ++j)
      if (modes[j].label == m.label) throw ConfigError("duplicate mode label '" + m.label + "'");
    if (!(m.omega > 0)) throw ConfigError("mode '" + m.label + "' must have omega > 0");
    if (!(m.kappa_ext >= 0) || !(m.kappa_int >= 0) || !(m.kappa() > 0))
      throw ConfigError("mode '" + m.label + "' needs kappa_ext, kappa_int >= 0 with a positive sum");
  }
  for (const auto& d : drives) {
    mode_index(d.mode_a);
    mode_index(d.mode_b);
    if (!(d.strength >= 0)) throw ConfigError(d.describe() + " has negative strength");
    if (!(d.phase >= 0 && d.phase < kTwoPi)) throw ConfigError(d.describe() + " phase must lie in [0, 2pi)");
    if (d.kind == DriveKind::conversion && d.mode_a == d.mode_b)
      throw ConfigError(d.describe() + " couples a mode to itself");
  }
  const auto& probe = modes[mode_index(probe_port)];
  if (!(probe.kappa_ext > 0)) throw ConfigError("probe port '" + probe_port + "' has no external coupling");
}

std::size_t ScatteringResult::port_index(std::string_view label) const {
  for (std::size_t i = 0; i < port_labels.size(); ++i)
    if (port_labels[i] == label) return i;
  throw ConfigError("unknown port '" + std::string(label) + "'");
}

CoupledModeNetwork::CoupledModeNetwork(NetworkSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  const std::size_t n = spec_.modes.size();

  // Frames: breadth-first over the drive graph starting at the probe port.
  frames_.assign(n, 0.0);
  std::vector<bool> seen(n, false);
  auto explore = [&](std::size_t root) {
    frames_[root] = spec_.modes[root].omega;
    seen[root] = true;
    std::deque<std::size_t> queue{root};
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (const auto& d : spec_.drives) {
        const std::size_t a = spec_.mode_index(d.mode_a), b = spec_.mode_index(d.mode_b);
        if (a == b || (a != u && b != u)) continue;
        const std::size_t v = a == u ? b : a;
        if (seen[v]) continue;
        const double wa = spec_.modes[a].omega, wb = spec_.modes[b].omega;
        const double pump = nominal_pump(d, wa, wb);
        if (d.kind == DriveKind::conversion) {
          const double s = conversion_sign(wa, wb);
          frames_[v] = v == b ? frames_[u] + s * pump : frames_[u] - s * pump;
        } else {
          frames_[v] = pump - frames_[u];
        }
        seen[v] = true;
        queue.push_back(v);
      }
    }
  };
  explore(spec_.mode_index(spec_.probe_port));
  for (std::size_t i = 0; i < n; ++i)
    if (!seen[i]) explore(i);

  double scale = 0;
  for (const auto& m : spec_.modes) scale = std::max(scale, m.omega);
  for (const auto& d : spec_.drives) {
    const std::size_t a = spec_.mode_index(d.mode_a), b = spec_.mode_index(d.mode_b);
    const double wa = spec_.modes[a].omega, wb = spec_.modes[b].omega;
    const double pump = nominal_pump(d, wa, wb);
    const double mismatch = d.kind == DriveKind::conversion
                                ? frames_[b] - frames_[a] - conversion_sign(wa, wb) * pump
                                : frames_[a] + frames_[b] - pump;
    if (std::abs(mismatch) > 1e-9 * scale)
      throw ConfigError("pump frequency of " + d.describe() +
                        " is incommensurate with the other drives on its loop");
  }

  for (std::size_t i = 0; i < n; ++i) {
    const auto& m = spec_.modes[i];
    if (m.kappa_ext > 0) ports_.push_back({m.label, i, m.kappa_ext, false});
    if (m.kappa_int > 0) ports_.push_back({m.label + ".loss", i, m.kappa_int, true});
  }
  coupling_ = Eigen::MatrixXd::Zero(2 * n, 2 * ports_.size());
  for (std::size_t p = 0; p < ports_.size(); ++p) {
    const double root = std::sqrt(ports_[p].kappa);
    coupling_(2 * ports_[p].mode, 2 * p) = root;
    coupling_(2 * ports_[p].mode + 1, 2 * p + 1) = root;
  }

  static_dynamics_ = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  auto& m = static_dynamics_;
  for (std::size_t j = 0; j < n; ++j) {
    const double half = spec_.modes[j].kappa() / 2;
    const double delta = spec_.modes[j].omega - frames_[j];
    m(2 * j, 2 * j) = cd(-half, -delta);
    m(2 * j + 1, 2 * j + 1) = cd(-half, delta);
  }
  for (const auto& d : spec_.drives) {
    const std::size_t a = spec_.mode_index(d.mode_a), b = spec_.mode_index(d.mode_b);
    const cd c = d.strength * std::exp(I * d.phase);
    if (d.kind == DriveKind::conversion) {
      m(2 * a, 2 * b) += -I * c;
      m(2 * b, 2 * a) += -I * std::conj(c);
      m(2 * a + 1, 2 * b + 1) += I * std::conj(c);
      m(2 * b + 1, 2 * a + 1) += I * c;
    } else if (a == b) {
      m(2 * a, 2 * a + 1) += -I * c;
      m(2 * a + 1, 2 * a) += I * std::conj(c);
    } else {
      m(2 * a, 2 * b + 1) += -I * c;
      m(2 * b, 2 * a + 1) += -I * c;
      m(2 * a + 1, 2 * b) += I * std::conj(c);
      m(2 * b + 1, 2 * a) += I * std::conj(c);
    }
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(static_dynamics_, false);
  margin_ = solver.eigenvalues().real().maxCoeff();
}

std::size_t CoupledModeNetwork::port_index(std::string_view label) const {
  for (std::size_t i = 0; i < ports_.size(); ++i)
    if (ports_[i].label == label) return i;
  throw ConfigError("unknown port '" + std::string(label) + "'");
}

double CoupledModeNetwork::max_linewidth() const {
  double k = 0;
  for (const auto& m : spec_.modes) k = std::max(k, m.kappa());
  return k;
}

Eigen::MatrixXcd CoupledModeNetwork::dynamics_at_detuning(double detuning) const {
  Eigen::MatrixXcd m = static_dynamics_;
  m.diagonal().array() += I * detuning;
  return m;
}

Eigen::MatrixXcd CoupledModeNetwork::dynamics(double probe_freq) const {
  if (!(probe_freq > 0)) throw DomainError("probe frequency must be positive");
  return dynamics_at_detuning(probe_freq - frames_[spec_.mode_index(spec_.probe_port)]);
}

double CoupledModeNetwork::stability_margin() const { return margin_; }

void CoupledModeNetwork::require_stable() const {
  if (margin_ < -1e-9 * max_linewidth()) return;
  const DriveSpec* worst = nullptr;
  for (const auto& d : spec_.drives)
    if (d.kind == DriveKind::gain && (!worst || d.strength > worst->strength)) worst = &d;
  throw InstabilityError(std::string("network is at or beyond its parametric oscillation threshold") +
                         (worst ? " (gain drive " + worst->describe() + ")" : ""));
}

ScatteringResult CoupledModeNetwork::scattering_at_detuning(double detuning) const {
  require_stable();
  const Eigen::MatrixXcd m = dynamics_at_detuning(detuning);
  const Eigen::MatrixXcd k = coupling_.cast<cd>();
  ScatteringResult out;
  out.frequency = frames_[spec_.mode_index(spec_.probe_port)] + detuning;
  out.s_matrix = Eigen::MatrixXcd::Identity(k.cols(), k.cols()) + k.transpose() * m.partialPivLu().solve(k);
  for (const auto& p : ports_) out.port_labels.push_back(p.label);
  return out;
}

ScatteringResult CoupledModeNetwork::scattering(double probe_freq) const {
  if (!(probe_freq > 0)) throw DomainError("probe frequency must be positive");
  return scattering_at_detuning(probe_freq - frames_[spec_.mode_index(spec_.probe_port)]);
}

Eigen::MatrixXcd CoupledModeNetwork::mode_response(std::size_t mode, double detuning) const {
  const Eigen::MatrixXcd m = dynamics_at_detuning(detuning);
  const Eigen::MatrixXcd full = -m.partialPivLu().solve(coupling_.cast<cd>());
  return full.middleRows(2 * mode, 2);
}

Eigen::MatrixXcd assemble_dynamics(const NetworkSpec& network, double probe_freq) {
  return CoupledModeNetwork(network).dynamics(probe_freq);
}

ScatteringResult scattering_matrix(const NetworkSpec& network, double probe_freq) {
  return CoupledModeNetwork(network).scattering(probe_freq);
}

std::vector<std::complex<double>> reflection_trace(const NetworkSpec& network, std::string_view port,
                                                   std::span<const double> freqs) {
  if (freqs.empty()) throw DomainError("reflection trace needs a non-empty frequency grid");
  const CoupledModeNetwork net(network);
  const std::size_t p = net.port_index(port);
  if (net.ports()[p].loss) throw DomainError("reflection trace needs an external port, got '" + std::string(port) + "'");
  net.require_stable();
  const double frame = net.frame_frequency(net.ports()[p].mode);
  std::vector<std::complex<double>> out(freqs.size());
  parallel_for(freqs.size(), [&](std::size_t i) {
    out[i] = net.scattering_at_detuning(freqs[i] - frame).signal(p, p);
  });
  return out;
}

double mode_occupancy_from_noise(const NetworkSpec& network, std::string_view target_mode,
                                 const std::map<std::string, double>& bath_occupations) {
  const CoupledModeNetwork net(network);
  const std::size_t target = network.mode_index(target_mode);
  std::vector<double> baths;
  for (const auto& p : net.ports()) {
    auto it = bath_occupations.find(p.label);
    if (it == bath_occupations.end()) throw DomainError("no bath occupancy given for port '" + p.label + "'");
    if (!(it->second >= 0)) throw DomainError("bath occupancy of '" + p.label + "' must be >= 0");
    baths.push_back(it->second);
  }
  for (const auto& [label, n] : bath_occupations) net.port_index(label);
  net.require_stable();

  // Normal-ordered <a^dag a>: signal-sector inputs carry n, conjugate-sector
  // inputs carry n + 1 (amplified vacuum).
  auto spectral_density = [&](double detuning) {
    const Eigen::MatrixXcd t = net.mode_response(target, detuning);
    double s = 0;
    for (std::size_t p = 0; p < baths.size(); ++p)
      s += std::norm(t(0, 2 * p)) * baths[p] + std::norm(t(0, 2 * p + 1)) * (baths[p] + 1.0);
    return s / (2.0 * std::numbers::pi);
  };
  std::vector<double> features;
  for (std::size_t j = 0; j < net.mode_count(); ++j) {
    const double delta = network.modes[j].omega - net.frame_frequency(j);
    features.push_back(delta);
    features.push_back(-delta);
  }
  const auto result = integrate_real_line(spectral_density, 0.0, net.max_linewidth(), 1e-9, features);
  return result.value;
}

double mode_occupancy_uniform_bath(const NetworkSpec& network, std::string_view target_mode, double n) {
  const CoupledModeNetwork net(network);
  std::map<std::string, double> baths;
  for (const auto& p : net.ports()) baths[p.label] = n;
  return mode_occupancy_from_noise(network, target_mode, baths);
}

double loop_phase(const NetworkSpec& network, std::span<const std::string> cycle) {
  if (cycle.size() < 3) throw ConfigError("a loop needs at least three modes");
  double total = 0;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const std::string& u = cycle[i];
    const std::string& v = cycle[(i + 1) % cycle.size()];
    bool found = false;
    for (const auto& d : network.drives) {
      if (d.kind != DriveKind::conversion) continue;
      if (d.mode_a == u && d.mode_b == v) {
        total += d.phase;
      } else if (d.mode_a == v && d.mode_b == u) {
        total -= d.phase;
      } else {
        continue;
      }
      found = true;
      break;
    }
    if (!found) throw ConfigError("no conversion drive between '" + u + "' and '" + v + "'");
  }
  return wrap_phase(total);
}

}  // namespace readout
