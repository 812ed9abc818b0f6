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

#ifndef READOUT_CONFIG_HPP
#define READOUT_CONFIG_HPP

// Scenario configuration. Files are JSON objects with // and /* */ comments
// allowed. Every physical quantity carries its unit in the key name
// (_mhz and _ghz are frequencies nu = omega / 2pi, _us and _ns times, _db
// gains, _rad phases, _phi0 flux in flux quanta); bare names are
// dimensionless. Values stay in these laboratory units here and are
// converted to rad/s and seconds only when a scenario is built.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "readout/errors.hpp"

namespace readout {

enum class Scenario {
  spectroscopy,
  scattering,
  occupancy_vs_phase,
  efficiency_curve,
  ramsey_sweep,
  readout_shots,
  fidelity,
  closure_test,
};

std::string to_string(Scenario s);
Scenario parse_scenario(const std::string& name);

enum class OutputFormat { csv, json };

std::string to_string(OutputFormat f);
OutputFormat parse_format(const std::string& name);

class ConfigParseError : public ConfigError {
 public:
  ConfigParseError(const std::string& what, std::size_t line, std::size_t column)
      : ConfigError(what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class UnknownKeyError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class UnitSuffixError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

struct OutputSection {
  std::string dir{"out"};
  std::string format{"csv"};
  bool operator==(const OutputSection&) const = default;
};

struct ReadoutSection {
  double chi_mhz{0.85};  // half the total dispersive splitting
  double kappa_mhz{2.58};
  double cavity_ghz{10.929};
  double t1_us{27.0};    // null in the file means no relaxation
  double n_env{0.01};
  double alpha2{2.5};
  double tau_ns{350.0};
  double eta_m{0.70};
  bool discard_ring_up{true};
  bool operator==(const ReadoutSection&) const = default;
};

struct ShotsSection {
  std::int64_t per_state{20000};
  std::int64_t histogram_bins{100};
  std::int64_t bootstrap_resamples{200};
  bool operator==(const ShotsSection&) const = default;
};

struct SweepSection {
  std::vector<double> alpha2_list{0.05, 0.1, 0.15, 0.2, 0.25, 0.3};
  std::vector<double> tau_ns_list{350.0};
  std::int64_t shots_per_state{10000};
  std::int64_t ramsey_shots_per_point{10000};
  std::int64_t ramsey_points{61};
  double ramsey_span{3.0};  // in units of the expected 1 / Gamma_2
  double ramsey_detuning_mhz{0.5};
  bool operator==(const SweepSection&) const = default;
};

struct ChainSection {
  std::string preset{"directional"};  // "directional" or "converter"
  double fpja_transmission{0.59};     // total, split equally around the FPJA gain
  double converter_transmission{0.82};
  double jpa_transmission{0.56};
  double jpa_gain_db{18.2};
  double hemt_added_quanta{36.0};
  std::string variable_stage{"phase_sensitive"};  // or "phase_preserving"
  double gain_start_db{0.0};
  double gain_stop_db{21.0};
  std::int64_t gain_points{22};
  bool estimate{true};  // run the simulate-and-extract pipeline at every gain
  bool operator==(const ChainSection&) const = default;
};

struct NetworkSection {
  std::string kind{"circulator"};  // "circulator" or "directional"
  double mode_a_ghz{6.912};
  double mode_b_ghz{8.013};
  double mode_c_ghz{10.929};
  double circulator_kappa_mhz{20.0};
  std::optional<double> loop_phase_rad;  // null: pi/2 for the circulator, 3 pi/2 for the amplifier
  double span_mhz{100.0};
  std::int64_t points{1001};
  double bath_occupancy{0.01};
  std::int64_t phase_points{72};
  double amp_gain_db{15.0};
  double target_cavity_kappa_mhz{2.58};
  bool operator==(const NetworkSection&) const = default;
};

struct SpectroscopySection {
  double cavity_ghz{10.929};
  double cavity_kappa_mhz{2.58};
  double resonance_flux_phi0{0.219};
  double tunable_participation{0.5};
  double tunable_kappa_mhz{20.0};
  double tunable_cavity_coupling_mhz{10.0};
  double ladder_fsr_mhz{535.0};
  double ladder_anchor_ghz{10.7};
  double ladder_kappa_mhz{5.0};
  double ladder_coupling_mhz{15.0};
  double flux_start_phi0{0.0};
  double flux_stop_phi0{0.3};
  std::int64_t flux_points{301};
  bool operator==(const SpectroscopySection&) const = default;
};

struct ClosureSection {
  std::int64_t trials{20};
  double eta_m{0.72};
  double n_env{0.01};
  bool operator==(const ClosureSection&) const = default;
};

struct ScenarioConfig {
  std::string scenario{"fidelity"};
  std::uint64_t seed{20240601};
  OutputSection output;
  ReadoutSection readout;
  ShotsSection shots;
  SweepSection sweep;
  ChainSection chain;
  NetworkSection network;
  SpectroscopySection spectroscopy;
  ClosureSection closure;

  // Where each value came from: "file" or "default: <note>". Keyed by
  // dotted path, e.g. "readout.kappa_mhz". Not part of equality.
  std::map<std::string, std::string> provenance;

  bool operator==(const ScenarioConfig& other) const;
  void validate() const;
};

/// Parses configuration text; `origin` names the source in error messages.
ScenarioConfig parse_config(const std::string& text, const std::string& origin = "<config>");
ScenarioConfig load_config(const std::string& path);

/// Canonical JSON form (no comments, fixed key order) that parse_config accepts.
std::string serialize_config(const ScenarioConfig& config);

/// 64-bit FNV-1a of serialize_config, as 16 hex digits.
std::string config_hash(const ScenarioConfig& config);

/// Every accepted dotted key with its default note.
std::vector<std::pair<std::string, std::string>> config_keys();

}  // namespace readout

#endif  // READOUT_CONFIG_HPP
