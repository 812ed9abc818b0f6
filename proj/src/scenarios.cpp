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

#include "readout/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "readout/coupled_mode.hpp"
#include "readout/errors.hpp"
#include "readout/estimation.hpp"
#include "readout/flux_tuning.hpp"
#include "readout/network_presets.hpp"
#include "readout/parallel.hpp"
#include "readout/units.hpp"

namespace readout {

Table::Table(std::string table_name, std::vector<std::string> column_names)
    : name(std::move(table_name)), columns(std::move(column_names)), values(columns.size()) {}

void Table::add_row(std::initializer_list<double> row) { add_row(std::vector<double>(row)); }

void Table::add_row(const std::vector<double>& row) {
  if (row.size() != columns.size())
    throw DomainError("table '" + name + "' expects " + std::to_string(columns.size()) + " values per row");
  for (std::size_t c = 0; c < row.size(); ++c) values[c].push_back(row[c]);
}

const std::vector<double>& Table::column(const std::string& col) const {
  for (std::size_t c = 0; c < columns.size(); ++c)
    if (columns[c] == col) return values[c];
  throw DomainError("table '" + name + "' has no column '" + col + "'");
}

const Table& ResultBundle::table(const std::string& name) const {
  for (const auto& t : tables)
    if (t.name == name) return t;
  throw DomainError("result bundle has no table '" + name + "'");
}

DispersiveParams<> dispersive_params(const ScenarioConfig& c) {
  return {units::mhz(c.readout.chi_mhz), units::mhz(c.readout.kappa_mhz), units::ghz(c.readout.cavity_ghz)};
}

QubitSpec<> qubit_spec(const ScenarioConfig& c) {
  QubitSpec<> q;
  q.t1 = std::isinf(c.readout.t1_us) ? std::numeric_limits<double>::infinity() : units::us(c.readout.t1_us);
  q.n_env = c.readout.n_env;
  return q;
}

MeasurementConfig<> measurement_config(const ScenarioConfig& c) {
  MeasurementConfig<> m;
  m.alpha2 = c.readout.alpha2;
  m.tau = units::ns(c.readout.tau_ns);
  m.gain_jpa_db = c.chain.jpa_gain_db;
  return m;
}

SweepPlan sweep_plan(const ScenarioConfig& c) {
  SweepPlan plan;
  plan.alpha2_grid = c.sweep.alpha2_list;
  for (double t : c.sweep.tau_ns_list) plan.tau_grid.push_back(units::ns(t));
  plan.shots_per_state = static_cast<std::size_t>(c.sweep.shots_per_state);
  plan.ramsey_shots_per_point = static_cast<std::size_t>(c.sweep.ramsey_shots_per_point);
  plan.ramsey_points = static_cast<std::size_t>(c.sweep.ramsey_points);
  plan.ramsey_span = c.sweep.ramsey_span;
  plan.ramsey_detuning = units::mhz(c.sweep.ramsey_detuning_mhz);
  plan.discard_ring_up = c.readout.discard_ring_up;
  return plan;
}

NoiseChain<> noise_chain(const ScenarioConfig& c) {
  NoiseChain<> chain = c.chain.preset == "converter"
                           ? chain_presets::converter(c.chain.converter_transmission, c.chain.jpa_transmission,
                                                      c.chain.hemt_added_quanta)
                           : chain_presets::directional(c.chain.fpja_transmission, c.chain.jpa_transmission,
                                                        c.chain.jpa_gain_db, c.chain.hemt_added_quanta);
  if (c.chain.variable_stage == "phase_preserving")
    for (auto& stage : chain.stages)
      if (stage.variable) stage.kind = StageKind::phase_preserving_gain;
  return chain;
}

namespace {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

ResultBundle run_spectroscopy(const ScenarioConfig& c) {
  const auto& s = c.spectroscopy;
  SpectroscopyModel model;
  TunableMode fpja;
  fpja.label = "fpja";
  fpja.participation = s.tunable_participation;
  fpja.omega_max = omega_max_for_resonance(s.tunable_participation, s.resonance_flux_phi0, units::ghz(s.cavity_ghz));
  fpja.kappa_ext = units::mhz(s.tunable_kappa_mhz);
  model.tunable.push_back(fpja);
  model.fixed.push_back({"cavity", units::ghz(s.cavity_ghz), units::mhz(s.cavity_kappa_mhz), 0.0});
  model.couplings.push_back({{"fpja", "cavity"}, units::mhz(s.tunable_cavity_coupling_mhz)});
  SpuriousLadder ladder;
  ladder.fsr = units::mhz(s.ladder_fsr_mhz);
  ladder.anchor = units::ghz(s.ladder_anchor_ghz);
  ladder.kappa = units::mhz(s.ladder_kappa_mhz);
  ladder.default_coupling = units::mhz(s.ladder_coupling_mhz);
  model.ladder = ladder;

  const auto fluxes = linspace(s.flux_start_phi0, s.flux_stop_phi0, static_cast<std::size_t>(s.flux_points));
  const FluxSweep sweep = flux_sweep(model, fluxes);
  const auto cavity_it = std::find(sweep.bare_labels.begin(), sweep.bare_labels.end(), "cavity");
  const auto cavity = static_cast<Eigen::Index>(cavity_it - sweep.bare_labels.begin());

  ResultBundle bundle;
  Table table("spectrum", {"flux_phi0", "branch", "frequency_ghz", "linewidth_mhz", "cavity_weight"});
  for (std::size_t i = 0; i < sweep.fluxes.size(); ++i) {
    const auto& spec = sweep.spectra[i];
    for (Eigen::Index k = 0; k < spec.eigenfrequencies.size(); ++k)
      table.add_row({sweep.fluxes[i], static_cast<double>(k), units::to_ghz(spec.eigenfrequencies[k]),
                     units::to_mhz(spec.eigenlinewidths[k]), spec.participations(k, cavity)});
  }
  bundle.tables.push_back(std::move(table));
  return bundle;
}

NetworkSpec circulator_from(const ScenarioConfig& c) {
  CirculatorDesign design;
  design.omegas = {units::ghz(c.network.mode_a_ghz), units::ghz(c.network.mode_b_ghz),
                   units::ghz(c.network.mode_c_ghz)};
  design.kappa = units::mhz(c.network.circulator_kappa_mhz);
  if (c.network.loop_phase_rad) design.loop_phase = *c.network.loop_phase_rad;
  return circulator_network(design);
}

DirectionalAmplifierDesign amplifier_from(const ScenarioConfig& c) {
  DirectionalAmplifierDesign design;
  design.output_omega = units::ghz(c.network.mode_a_ghz);
  design.amplifier_omega = units::ghz(c.network.mode_b_ghz);
  design.cavity_omega = units::ghz(c.network.mode_c_ghz);
  design = calibrate_directional_amplifier(design, c.network.amp_gain_db,
                                           units::mhz(c.network.target_cavity_kappa_mhz));
  if (c.network.loop_phase_rad) design.loop_phase = *c.network.loop_phase_rad;
  return design;
}

ResultBundle run_scattering(const ScenarioConfig& c) {
  const NetworkSpec spec = c.network.kind == "circulator" ? circulator_from(c)
                                                          : directional_amplifier_network(amplifier_from(c));
  const CoupledModeNetwork network(spec);
  network.require_stable();
  const bool has_gain = std::any_of(spec.drives.begin(), spec.drives.end(),
                                    [](const DriveSpec& d) { return d.kind == DriveKind::gain; });

  std::vector<std::size_t> external;
  for (std::size_t p = 0; p < network.ports().size(); ++p)
    if (!network.ports()[p].loss) external.push_back(p);
  std::vector<std::string> columns{"detuning_mhz"};
  for (const char* prefix : {"s_", "i_"}) {
    if (std::string(prefix) == "i_" && !has_gain) break;
    for (std::size_t o : external)
      for (std::size_t i : external)
        columns.push_back(prefix + network.ports()[o].label + "_" + network.ports()[i].label);
  }

  const auto detunings = linspace(-units::mhz(c.network.span_mhz) / 2, units::mhz(c.network.span_mhz) / 2,
                                  static_cast<std::size_t>(c.network.points));
  std::vector<std::vector<double>> rows(detunings.size());
  parallel_for(detunings.size(), [&](std::size_t k) {
    const ScatteringResult s = network.scattering_at_detuning(detunings[k]);
    auto& row = rows[k];
    row.push_back(units::to_mhz(detunings[k]));
    for (std::size_t o : external)
      for (std::size_t i : external) row.push_back(std::abs(s.signal(o, i)));
    if (has_gain)
      for (std::size_t o : external)
        for (std::size_t i : external) row.push_back(std::abs(s.idler(o, i)));
  });
  ResultBundle bundle;
  Table table("scattering", columns);
  for (const auto& row : rows) table.add_row(row);
  bundle.tables.push_back(std::move(table));
  return bundle;
}

ResultBundle run_occupancy(const ScenarioConfig& c) {
  const bool circulator = c.network.kind == "circulator";
  const DirectionalAmplifierDesign amplifier = circulator ? DirectionalAmplifierDesign{} : amplifier_from(c);
  const auto phases = linspace(0.0, 2 * std::numbers::pi, static_cast<std::size_t>(c.network.phase_points) + 1);
  std::vector<double> occupancy(phases.size() - 1);  // [0, 2 pi)
  parallel_for(occupancy.size(), [&](std::size_t k) {
    if (circulator) {
      ScenarioConfig local = c;
      local.network.loop_phase_rad = phases[k];
      occupancy[k] = mode_occupancy_uniform_bath(circulator_from(local), "c", c.network.bath_occupancy);
    } else {
      DirectionalAmplifierDesign design = amplifier;
      design.loop_phase = phases[k];
      occupancy[k] = mode_occupancy_uniform_bath(directional_amplifier_network(design), kCavity,
                                                 c.network.bath_occupancy);
    }
  });
  ResultBundle bundle;
  Table table("occupancy", {"loop_phase_rad", "occupancy"});
  for (std::size_t k = 0; k < occupancy.size(); ++k) table.add_row({phases[k], occupancy[k]});
  bundle.tables.push_back(std::move(table));
  return bundle;
}

ResultBundle run_efficiency_curve(const ScenarioConfig& c) {
  const NoiseChain<> chain = noise_chain(c);
  const auto gains = linspace(c.chain.gain_start_db, c.chain.gain_stop_db, static_cast<std::size_t>(c.chain.gain_points));
  const auto curve = efficiency_vs_gain(chain, gains);
  const auto d = dispersive_params(c);
  const auto q = qubit_spec(c);
  const auto m = measurement_config(c);

  ResultBundle bundle;
  Table table("efficiency", {"gain_db", "eta_model", "eta_estimated", "sigma"});
  for (std::size_t i = 0; i < curve.size(); ++i) {
    double estimate = kNan, sigma = kNan;
    if (c.chain.estimate) {
      SweepPlan plan = sweep_plan(c);
      plan.stream = "efficiency/" + std::to_string(i);
      const SweepData data = sweep_measurement_strength(d, q, m, curve[i].eta, plan, SeedSpec{c.seed});
      const SweepAnalysis analysis = analyze_sweep(data, d, q);
      estimate = analysis.efficiency.eta_m;
      sigma = analysis.efficiency.sigma_eta;
    }
    table.add_row({curve[i].gain_db, curve[i].eta, estimate, sigma});
  }
  bundle.tables.push_back(std::move(table));
  return bundle;
}

void add_sweep_tables(ResultBundle& bundle, const SweepData& data, const SweepAnalysis& a,
                      const DispersiveParams<>& d, const QubitSpec<>& q, double eta_m) {
  Table ramsey("ramsey", {"alpha2", "delay_us", "excited_probability", "fit_probability"});
  for (std::size_t i = 0; i < data.ramsey.size(); ++i) {
    const auto& trace = data.ramsey[i].trace;
    for (std::size_t k = 0; k < trace.delays.size(); ++k)
      ramsey.add_row({data.ramsey[i].alpha2, units::to_us(trace.delays[k]), trace.excited_probability[k],
                      ramsey_probability(a.gamma2[i].gamma2, a.gamma2[i].detuning, trace.delays[k],
                                         a.gamma2[i].phase)});
  }
  Table gamma2("gamma2", {"alpha2", "gamma2_fit", "sigma", "gamma2_model"});
  for (std::size_t i = 0; i < a.gamma2.size(); ++i)
    gamma2.add_row({a.alpha2[i], a.gamma2[i].gamma2, a.gamma2[i].sigma, data.ramsey[i].gamma2_true});
  Table snr("snr", {"alpha2", "tau_ns", "window_ns", "snr2", "sigma", "gamma_m", "sigma_gamma_m", "gamma_m_model"});
  for (const auto& p : a.snr)
    snr.add_row({p.alpha2, units::to_ns(p.tau), units::to_ns(p.window), p.snr2.snr2, p.snr2.sigma, p.gamma_m,
                 p.sigma_gamma_m, eta_m * dephasing_meas(d, p.alpha2)});
  const auto& e = a.efficiency;
  Table summary("summary", {"eta_m", "sigma_eta", "eta_m_true", "gamma_m_slope", "gamma_phi_slope",
                            "sigma_gamma_phi_slope", "model_dephasing_slope", "n_env", "sigma_n_env", "n_env_true",
                            "n_env_clipped"});
  summary.add_row({e.eta_m, e.sigma_eta, eta_m, e.gamma_m_slope, e.gamma_phi_slope, e.gamma2_fit.sigma_slope(),
                   e.model_dephasing_slope, a.n_env.n_env, a.n_env.sigma, q.n_env, a.n_env.clipped ? 1.0 : 0.0});
  bundle.tables.push_back(std::move(ramsey));
  bundle.tables.push_back(std::move(gamma2));
  bundle.tables.push_back(std::move(snr));
  bundle.tables.push_back(std::move(summary));
}

ResultBundle run_ramsey_sweep(const ScenarioConfig& c) {
  const auto d = dispersive_params(c);
  const auto q = qubit_spec(c);
  const SweepData data =
      sweep_measurement_strength(d, q, measurement_config(c), c.readout.eta_m, sweep_plan(c), SeedSpec{c.seed});
  const SweepAnalysis analysis = analyze_sweep(data, d, q);
  ResultBundle bundle;
  add_sweep_tables(bundle, data, analysis, d, q, c.readout.eta_m);
  for (const auto& g : analysis.gamma2)
    for (const auto& w : g.warnings) bundle.metadata.warnings.push_back(w);
  return bundle;
}

ResultBundle run_readout_shots(const ScenarioConfig& c) {
  const auto d = dispersive_params(c);
  const auto q = qubit_spec(c);
  const auto m = measurement_config(c);
  const SeedSpec seed{c.seed};
  ShotOptions options;
  options.discard_ring_up = c.readout.discard_ring_up;
  const auto n = static_cast<std::size_t>(c.shots.per_state);
  const auto g = simulate_shots(d, q, m, c.readout.eta_m, QubitState::g, n, seed, options);
  const auto e = simulate_shots(d, q, m, c.readout.eta_m, QubitState::e, n, seed, options);
  const FidelityResult fidelity = histogram_fidelity(std::span<const ShotRecord>(g), std::span<const ShotRecord>(e));
  const BootstrapResult se = bootstrap_uncertainty<ShotRecord>(
      [](std::span<const ShotRecord> a, std::span<const ShotRecord> b) { return histogram_fidelity(a, b).fidelity; },
      std::span<const ShotRecord>(g), std::span<const ShotRecord>(e),
      static_cast<std::size_t>(c.shots.bootstrap_resamples), seed, "readout_shots/bootstrap");
  const auto model = fidelity_model(d, q, m, c.readout.eta_m);

  ResultBundle bundle;
  bundle.metadata.warnings = model.warnings;
  Table shots("shots", {"state", "signal", "decay_time_us"});
  std::size_t decays = 0;
  for (const auto* set : {&g, &e})
    for (const auto& s : *set) {
      shots.add_row({s.prepared == QubitState::g ? 0.0 : 1.0, s.integrated_signal,
                     s.decay_time ? units::to_us(*s.decay_time) : kNan});
      decays += s.decay_time ? 1 : 0;
    }

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto* set : {&g, &e})
    for (const auto& s : *set) {
      lo = std::min(lo, s.integrated_signal);
      hi = std::max(hi, s.integrated_signal);
    }
  const auto bins = static_cast<std::size_t>(c.shots.histogram_bins);
  const double width = hi > lo ? (hi - lo) / static_cast<double>(bins) : 1.0;
  std::vector<double> count_g(bins, 0.0), count_e(bins, 0.0);
  auto bin_of = [&](double v) {
    return std::min(bins - 1, static_cast<std::size_t>(std::max(0.0, (v - lo) / width)));
  };
  for (const auto& s : g) count_g[bin_of(s.integrated_signal)] += 1;
  for (const auto& s : e) count_e[bin_of(s.integrated_signal)] += 1;
  Table histogram("histogram", {"signal", "count_g", "count_e"});
  for (std::size_t b = 0; b < bins; ++b)
    histogram.add_row({lo + (static_cast<double>(b) + 0.5) * width, count_g[b], count_e[b]});

  Table summary("summary", {"fidelity", "threshold", "p_e_given_g", "p_g_given_e", "fidelity_se",
                            "bootstrap_failures", "fidelity_model", "snr_model", "decay_fraction"});
  summary.add_row({fidelity.fidelity, fidelity.threshold, fidelity.p_e_given_g, fidelity.p_g_given_e,
                   se.standard_error, static_cast<double>(se.failures), model.fidelity, model.snr,
                   static_cast<double>(decays) / static_cast<double>(e.size())});
  bundle.tables.push_back(std::move(shots));
  bundle.tables.push_back(std::move(histogram));
  bundle.tables.push_back(std::move(summary));
  return bundle;
}

ResultBundle run_fidelity(const ScenarioConfig& c) {
  const auto d = dispersive_params(c);
  const auto q = qubit_spec(c);
  ResultBundle bundle;
  Table table("fidelity", {"tau_ns", "snr_model", "relaxation_error", "fidelity_model", "fidelity_mc",
                           "p_e_given_g", "p_g_given_e", "threshold"});
  const auto n = static_cast<std::size_t>(c.shots.per_state);
  for (std::size_t i = 0; i < c.sweep.tau_ns_list.size(); ++i) {
    MeasurementConfig<> m = measurement_config(c);
    m.tau = units::ns(c.sweep.tau_ns_list[i]);
    const auto model = fidelity_model(d, q, m, c.readout.eta_m);
    for (const auto& w : model.warnings)
      if (std::find(bundle.metadata.warnings.begin(), bundle.metadata.warnings.end(), w) ==
          bundle.metadata.warnings.end())
        bundle.metadata.warnings.push_back(w);
    ShotOptions options;
    options.discard_ring_up = c.readout.discard_ring_up;
    options.stream = "fidelity/" + std::to_string(i);
    const auto g = simulate_shots(d, q, m, c.readout.eta_m, QubitState::g, n, SeedSpec{c.seed}, options);
    const auto e = simulate_shots(d, q, m, c.readout.eta_m, QubitState::e, n, SeedSpec{c.seed}, options);
    const auto mc = histogram_fidelity(std::span<const ShotRecord>(g), std::span<const ShotRecord>(e));
    table.add_row({c.sweep.tau_ns_list[i], model.snr, model.relaxation_error, model.fidelity, mc.fidelity,
                   mc.p_e_given_g, mc.p_g_given_e, mc.threshold});
  }
  bundle.tables.push_back(std::move(table));
  return bundle;
}

ResultBundle run_closure(const ScenarioConfig& c) {
  const auto d = dispersive_params(c);
  QubitSpec<> q = qubit_spec(c);
  q.n_env = c.closure.n_env;
  const auto m = measurement_config(c);
  ResultBundle bundle;
  Table table("closure", {"trial", "eta_true", "eta_estimated", "sigma_eta", "n_env_true", "n_env_estimated",
                          "sigma_n_env", "gamma2_slope", "sigma_gamma2_slope", "model_dephasing_slope"});
  std::size_t eta_ok = 0, n_env_ok = 0, slope_ok = 0;
  const auto trials = static_cast<std::size_t>(c.closure.trials);
  for (std::size_t t = 0; t < trials; ++t) {
    SweepPlan plan = sweep_plan(c);
    plan.stream = "closure/" + std::to_string(t);
    const SweepData data = sweep_measurement_strength(d, q, m, c.closure.eta_m, plan, SeedSpec{c.seed});
    const SweepAnalysis a = analyze_sweep(data, d, q);
    const auto& e = a.efficiency;
    table.add_row({static_cast<double>(t), c.closure.eta_m, e.eta_m, e.sigma_eta, c.closure.n_env, a.n_env.n_env,
                   a.n_env.sigma, e.gamma_phi_slope, e.gamma2_fit.sigma_slope(), e.model_dephasing_slope});
    eta_ok += std::abs(e.eta_m - c.closure.eta_m) <= 3 * e.sigma_eta;
    n_env_ok += std::abs(a.n_env.n_env - c.closure.n_env) <= 3 * a.n_env.sigma;
    slope_ok += std::abs(e.gamma_phi_slope - e.model_dephasing_slope) <= 3 * e.gamma2_fit.sigma_slope();
  }
  const double nt = static_cast<double>(trials);
  Table summary("summary", {"trials", "eta_within_3sigma", "n_env_within_3sigma", "slope_within_3sigma"});
  summary.add_row({nt, static_cast<double>(eta_ok) / nt, static_cast<double>(n_env_ok) / nt,
                   static_cast<double>(slope_ok) / nt});
  bundle.tables.push_back(std::move(table));
  bundle.tables.push_back(std::move(summary));
  return bundle;
}

ResultBundle dispatch(const ScenarioConfig& c) {
  switch (parse_scenario(c.scenario)) {
    case Scenario::spectroscopy: return run_spectroscopy(c);
    case Scenario::scattering: return run_scattering(c);
    case Scenario::occupancy_vs_phase: return run_occupancy(c);
    case Scenario::efficiency_curve: return run_efficiency_curve(c);
    case Scenario::ramsey_sweep: return run_ramsey_sweep(c);
    case Scenario::readout_shots: return run_readout_shots(c);
    case Scenario::fidelity: return run_fidelity(c);
    case Scenario::closure_test: return run_closure(c);
  }
  throw ConfigError("unhandled scenario '" + c.scenario + "'");
}

}  // namespace

ResultBundle run_scenario(const ScenarioConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  ResultBundle bundle;
  const std::string context = "scenario " + config.scenario + ": ";
  try {
    bundle = dispatch(config);
  } catch (const ConfigError& e) {
    throw ConfigError(context + e.what());
  } catch (const IoError& e) {
    throw IoError(context + e.what());
  } catch (const InstabilityError& e) {
    throw InstabilityError(context + e.what());
  } catch (const AmbiguityError& e) {
    throw AmbiguityError(context + e.what());
  } catch (const FitError& e) {
    throw FitError(context + e.what());
  } catch (const InconsistencyError& e) {
    throw InconsistencyError(context + e.what());
  } catch (const DomainError& e) {
    throw DomainError(context + e.what());
  } catch (const Error& e) {
    throw Error(context + e.what());
  }
  bundle.metadata.tool_version = kToolVersion;
  bundle.metadata.scenario = config.scenario;
  bundle.metadata.config_hash = config_hash(config);
  bundle.metadata.master_seed = config.seed;
  bundle.metadata.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return bundle;
}

}  // namespace readout
