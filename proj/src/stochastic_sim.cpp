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

#include "readout/stochastic_sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "readout/errors.hpp"
#include "readout/parallel.hpp"

namespace readout {

IntegrationWindow integration_window(const DispersiveParams<>& d, double tau, bool discard_ring_up) {
  d.validate();
  if (!(tau > 0)) throw DomainError("integration time must be positive");
  const double start = discard_ring_up ? 2.0 / d.kappa : 0.0;
  if (!(tau > start)) throw DomainError("integration time shorter than the discarded cavity ring-up 2/kappa");
  return {start, tau};
}

std::vector<ShotRecord> simulate_shots(const DispersiveParams<>& d, const QubitSpec<>& q,
                                       const MeasurementConfig<>& m, double eta_m, QubitState prepared,
                                       std::size_t n_shots, const SeedSpec& seed, const ShotOptions& options) {
  q.validate();
  m.validate();
  if (!(eta_m >= 0 && eta_m <= 1)) throw DomainError("eta_m must lie in [0, 1]");
  if (n_shots == 0) throw DomainError("need at least one shot");
  const IntegrationWindow window = integration_window(d, m.tau, options.discard_ring_up);
  const double level = std::sqrt(eta_m * dephasing_meas(d, m.alpha2));
  const double noise_sigma = std::sqrt(window.length() / 2);
  const bool excited = prepared == QubitState::e;
  const bool relaxes = excited && std::isfinite(q.t1);
  const std::string stream = options.stream + (excited ? "/e" : "/g");

  std::vector<ShotRecord> shots(n_shots);
  const std::size_t n_blocks = (n_shots + kShotBlock - 1) / kShotBlock;
  parallel_for(n_blocks, [&](std::size_t block) {
    Engine engine = make_engine(seed, stream, block);
    std::normal_distribution<double> noise(0.0, noise_sigma);
    std::exponential_distribution<double> decay(relaxes ? 1.0 / q.t1 : 1.0);
    const std::size_t end = std::min(n_shots, (block + 1) * kShotBlock);
    for (std::size_t i = block * kShotBlock; i < end; ++i) {
      ShotRecord& shot = shots[i];
      shot.prepared = prepared;
      double time_in_e = excited ? window.length() : 0.0;
      if (relaxes) {
        const double t_decay = decay(engine);
        if (t_decay <= m.tau) {
          shot.decay_time = t_decay;
          time_in_e = std::clamp(t_decay, window.start, window.end) - window.start;
        }
      }
      const double mean = level * (window.length() - 2 * time_in_e);
      shot.integrated_signal = mean + noise(engine);
    }
  });
  return shots;
}

double ramsey_probability(double gamma2, double detuning, double t, double phase) {
  return 0.5 * (1.0 + std::exp(-gamma2 * t) * std::cos(detuning * t + phase));
}

double expected_gamma2(const DispersiveParams<>& d, const QubitSpec<>& q, double alpha2) {
  q.validate();
  return total_decoherence(q.gamma1(), dephasing_env(d, q.n_env), dephasing_meas(d, alpha2));
}

RamseyTrace simulate_ramsey(const DispersiveParams<>& d, const QubitSpec<>& q, const MeasurementConfig<>& m,
                            std::span<const double> delays, std::size_t shots_per_point, const SeedSpec& seed,
                            const RamseyOptions& options) {
  if (delays.empty()) throw DomainError("Ramsey delay grid must not be empty");
  if (shots_per_point == 0) throw DomainError("need at least one shot per Ramsey point");
  const double gamma2 = expected_gamma2(d, q, m.alpha2);
  RamseyTrace trace;
  trace.delays.assign(delays.begin(), delays.end());
  trace.excited_probability.resize(delays.size());
  trace.shots_per_point = shots_per_point;
  trace.detuning = options.detuning;
  parallel_for(delays.size(), [&](std::size_t i) {
    Engine engine = make_engine(seed, options.stream, i);
    const double p = ramsey_probability(gamma2, options.detuning, delays[i]);
    std::binomial_distribution<std::size_t> sample(shots_per_point, std::clamp(p, 0.0, 1.0));
    trace.excited_probability[i] = static_cast<double>(sample(engine)) / static_cast<double>(shots_per_point);
  });
  return trace;
}

SweepData sweep_measurement_strength(const DispersiveParams<>& d, const QubitSpec<>& q,
                                     const MeasurementConfig<>& m_template, double eta_m, const SweepPlan& plan,
                                     const SeedSpec& seed) {
  if (plan.alpha2_grid.empty() || plan.tau_grid.empty()) throw DomainError("sweep grids must not be empty");
  if (plan.ramsey_points < 2) throw DomainError("Ramsey traces need at least two delays");
  SweepData data;
  data.discard_ring_up = plan.discard_ring_up;
  for (std::size_t i = 0; i < plan.alpha2_grid.size(); ++i) {
    MeasurementConfig<> m = m_template;
    m.alpha2 = plan.alpha2_grid[i];
    RamseyPoint point;
    point.alpha2 = m.alpha2;
    point.gamma2_true = expected_gamma2(d, q, m.alpha2);
    const double span = plan.ramsey_span / point.gamma2_true;
    std::vector<double> delays(plan.ramsey_points);
    for (std::size_t k = 0; k < delays.size(); ++k)
      delays[k] = span * static_cast<double>(k) / static_cast<double>(delays.size() - 1);
    RamseyOptions ro;
    ro.detuning = std::max(plan.ramsey_detuning, 4.0 * point.gamma2_true);
    ro.stream = plan.stream + "/ramsey/" + std::to_string(i);
    point.trace = simulate_ramsey(d, q, m, delays, plan.ramsey_shots_per_point, seed, ro);
    data.ramsey.push_back(std::move(point));

    for (std::size_t j = 0; j < plan.tau_grid.size(); ++j) {
      m.tau = plan.tau_grid[j];
      ShotOptions so;
      so.discard_ring_up = plan.discard_ring_up;
      so.stream = plan.stream + "/shots/" + std::to_string(i) + "/" + std::to_string(j);
      ShotPoint sp;
      sp.alpha2 = m.alpha2;
      sp.tau = m.tau;
      sp.ground = simulate_shots(d, q, m, eta_m, QubitState::g, plan.shots_per_state, seed, so);
      sp.excited = simulate_shots(d, q, m, eta_m, QubitState::e, plan.shots_per_state, seed, so);
      data.shots.push_back(std::move(sp));
    }
  }
  return data;
}

}  // namespace readout
