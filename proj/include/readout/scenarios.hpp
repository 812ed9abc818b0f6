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

#ifndef READOUT_SCENARIOS_HPP
#define READOUT_SCENARIOS_HPP

// Named scenarios that tie the modules together and return plot-ready tables.
//
// Table schemas (one row per point; states are 0 = g, 1 = e):
//   spectroscopy        spectrum: flux_phi0, branch, frequency_ghz, linewidth_mhz, cavity_weight
//   scattering          scattering: detuning_mhz, s_<out>_<in> (|S| signal), i_<out>_<in> (|S| idler, gain networks)
//   occupancy_vs_phase  occupancy: loop_phase_rad, occupancy
//   efficiency_curve    efficiency: gain_db, eta_model, eta_estimated, sigma
//   ramsey_sweep        ramsey, gamma2, snr, summary
//   readout_shots       shots, histogram, summary
//   fidelity            fidelity: tau_ns, snr_model, relaxation_error, fidelity_model, fidelity_mc, ...
//   closure_test        closure, summary

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "readout/config.hpp"
#include "readout/dephasing.hpp"
#include "readout/noise_cascade.hpp"
#include "readout/stochastic_sim.hpp"

namespace readout {

inline constexpr const char* kToolVersion = "0.1.0";

/// Named columns of doubles, stored column-major.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> values;  // values[column][row]

  Table() = default;
  Table(std::string name, std::vector<std::string> columns);

  std::size_t rows() const { return values.empty() ? 0 : values.front().size(); }
  void add_row(std::initializer_list<double> row);
  void add_row(const std::vector<double>& row);
  const std::vector<double>& column(const std::string& name) const;
  bool operator==(const Table&) const = default;
};

struct BundleMetadata {
  std::string tool_version{kToolVersion};
  std::string scenario;
  std::string config_hash;
  std::uint64_t master_seed{};
  double wall_time_s{};
  std::vector<std::string> warnings;
  bool operator==(const BundleMetadata&) const = default;
};

struct ResultBundle {
  std::vector<Table> tables;
  BundleMetadata metadata;

  const Table& table(const std::string& name) const;
};

DispersiveParams<> dispersive_params(const ScenarioConfig& config);
QubitSpec<> qubit_spec(const ScenarioConfig& config);
MeasurementConfig<> measurement_config(const ScenarioConfig& config);
SweepPlan sweep_plan(const ScenarioConfig& config);
NoiseChain<> noise_chain(const ScenarioConfig& config);

/// Runs config.scenario. Module errors are rethrown with the scenario name
/// prepended and their type preserved.
ResultBundle run_scenario(const ScenarioConfig& config);

}  // namespace readout

#endif  // READOUT_SCENARIOS_HPP
