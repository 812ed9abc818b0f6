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

#include "readout/config.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <variant>

#include <json.hpp>

namespace readout {

namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

constexpr std::array<const char*, 8> kScenarioNames{
    "spectroscopy", "scattering", "occupancy_vs_phase", "efficiency_curve",
    "ramsey_sweep", "readout_shots", "fidelity",         "closure_test"};

constexpr std::array<const char*, 7> kUnitSuffixes{"_mhz", "_ghz", "_us", "_ns", "_db", "_rad", "_phi0"};

using Target = std::variant<double*, std::optional<double>*, std::int64_t*, std::uint64_t*, bool*, std::string*, std::vector<double>*>;

struct Field {
  std::string section;  // empty for top-level keys
  std::string key;
  Target target;
  std::string note;     // provenance of the default
  bool nullable{};      // null means +infinity
};

std::string path_of(const Field& f) { return f.section.empty() ? f.key : f.section + "." + f.key; }

std::vector<Field> fields(ScenarioConfig& c) {
  const std::string reported = "reported value";
  const std::string illustrative = "illustrative, not a reported value";
  const std::string choice = "artifact choice";
  return {
      {"", "scenario", &c.scenario, choice},
      {"", "seed", &c.seed, choice},
      {"output", "dir", &c.output.dir, choice},
      {"output", "format", &c.output.format, choice},

      {"readout", "chi_mhz", &c.readout.chi_mhz, reported + " (total splitting 1.7 MHz)"},
      {"readout", "kappa_mhz", &c.readout.kappa_mhz, reported},
      {"readout", "cavity_ghz", &c.readout.cavity_ghz, reported},
      {"readout", "t1_us", &c.readout.t1_us, reported, true},
      {"readout", "n_env", &c.readout.n_env, reported},
      {"readout", "alpha2", &c.readout.alpha2, reported + " (histogram configuration)"},
      {"readout", "tau_ns", &c.readout.tau_ns, reported},
      {"readout", "eta_m", &c.readout.eta_m, reported + " (histogram configuration)"},
      {"readout", "discard_ring_up", &c.readout.discard_ring_up, choice},

      {"shots", "per_state", &c.shots.per_state, choice},
      {"shots", "histogram_bins", &c.shots.histogram_bins, choice},
      {"shots", "bootstrap_resamples", &c.shots.bootstrap_resamples, choice},

      {"sweep", "alpha2_list", &c.sweep.alpha2_list, choice},
      {"sweep", "tau_ns_list", &c.sweep.tau_ns_list, choice},
      {"sweep", "shots_per_state", &c.sweep.shots_per_state, choice},
      {"sweep", "ramsey_shots_per_point", &c.sweep.ramsey_shots_per_point, choice},
      {"sweep", "ramsey_points", &c.sweep.ramsey_points, choice},
      {"sweep", "ramsey_span", &c.sweep.ramsey_span, choice},
      {"sweep", "ramsey_detuning_mhz", &c.sweep.ramsey_detuning_mhz, choice},

      {"chain", "preset", &c.chain.preset, choice},
      {"chain", "fpja_transmission", &c.chain.fpja_transmission, reported},
      {"chain", "converter_transmission", &c.chain.converter_transmission, reported},
      {"chain", "jpa_transmission", &c.chain.jpa_transmission, reported},
      {"chain", "jpa_gain_db", &c.chain.jpa_gain_db, reported},
      {"chain", "hemt_added_quanta", &c.chain.hemt_added_quanta, reported},
      {"chain", "variable_stage", &c.chain.variable_stage, choice},
      {"chain", "gain_start_db", &c.chain.gain_start_db, reported + " (plotted range)"},
      {"chain", "gain_stop_db", &c.chain.gain_stop_db, reported + " (plotted range)"},
      {"chain", "gain_points", &c.chain.gain_points, choice},
      {"chain", "estimate", &c.chain.estimate, choice},

      {"network", "kind", &c.network.kind, choice},
      {"network", "mode_a_ghz", &c.network.mode_a_ghz, reported},
      {"network", "mode_b_ghz", &c.network.mode_b_ghz, reported},
      {"network", "mode_c_ghz", &c.network.mode_c_ghz, reported},
      {"network", "circulator_kappa_mhz", &c.network.circulator_kappa_mhz, illustrative},
      {"network", "loop_phase_rad", &c.network.loop_phase_rad, choice},
      {"network", "span_mhz", &c.network.span_mhz, choice},
      {"network", "points", &c.network.points, choice},
      {"network", "bath_occupancy", &c.network.bath_occupancy, reported},
      {"network", "phase_points", &c.network.phase_points, choice},
      {"network", "amp_gain_db", &c.network.amp_gain_db, illustrative},
      {"network", "target_cavity_kappa_mhz", &c.network.target_cavity_kappa_mhz, reported},

      {"spectroscopy", "cavity_ghz", &c.spectroscopy.cavity_ghz, reported},
      {"spectroscopy", "cavity_kappa_mhz", &c.spectroscopy.cavity_kappa_mhz, reported},
      {"spectroscopy", "resonance_flux_phi0", &c.spectroscopy.resonance_flux_phi0, reported},
      {"spectroscopy", "tunable_participation", &c.spectroscopy.tunable_participation, illustrative},
      {"spectroscopy", "tunable_kappa_mhz", &c.spectroscopy.tunable_kappa_mhz, illustrative},
      {"spectroscopy", "tunable_cavity_coupling_mhz", &c.spectroscopy.tunable_cavity_coupling_mhz, illustrative},
      {"spectroscopy", "ladder_fsr_mhz", &c.spectroscopy.ladder_fsr_mhz, reported},
      {"spectroscopy", "ladder_anchor_ghz", &c.spectroscopy.ladder_anchor_ghz, illustrative},
      {"spectroscopy", "ladder_kappa_mhz", &c.spectroscopy.ladder_kappa_mhz, illustrative},
      {"spectroscopy", "ladder_coupling_mhz", &c.spectroscopy.ladder_coupling_mhz, illustrative},
      {"spectroscopy", "flux_start_phi0", &c.spectroscopy.flux_start_phi0, choice},
      {"spectroscopy", "flux_stop_phi0", &c.spectroscopy.flux_stop_phi0, choice},
      {"spectroscopy", "flux_points", &c.spectroscopy.flux_points, choice},

      {"closure", "trials", &c.closure.trials, choice},
      {"closure", "eta_m", &c.closure.eta_m, reported},
      {"closure", "n_env", &c.closure.n_env, reported},
  };
}

bool is_section(const std::vector<Field>& fs, const std::string& name) {
  for (const auto& f : fs)
    if (f.section == name) return true;
  return false;
}

const Field* find_field(const std::vector<Field>& fs, const std::string& section, const std::string& key) {
  for (const auto& f : fs)
    if (f.section == section && f.key == key) return &f;
  return nullptr;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

[[noreturn]] void reject_key(const std::vector<Field>& fs, const std::string& section, const std::string& key) {
  const std::string where = section.empty() ? key : section + "." + key;
  auto known = [&](const std::string& k) { return find_field(fs, section, k) != nullptr; };
  const bool is_list = ends_with(key, "_list");
  const std::string bare = is_list ? key.substr(0, key.size() - 5) : key;
  for (const char* unit : kUnitSuffixes) {
    for (const char* tail : {"", "_list"}) {
      const std::string candidate = bare + unit + tail;
      if (known(candidate))
        throw UnitSuffixError("key '" + where + "' lacks a unit suffix; expected '" + candidate + "'");
    }
  }
  for (const char* unit : kUnitSuffixes) {
    std::string stem = key;
    std::string tail;
    if (ends_with(stem, "_list")) {
      stem.resize(stem.size() - 5);
      tail = "_list";
    }
    if (!ends_with(stem, unit)) continue;
    stem.resize(stem.size() - std::char_traits<char>::length(unit));
    for (const char* other : kUnitSuffixes) {
      const std::string candidate = stem + other + tail;
      if (known(candidate))
        throw UnitSuffixError("key '" + where + "' has unit suffix '" + unit + "' but expects '" + candidate + "'");
    }
  }
  throw UnknownKeyError("unknown configuration key '" + where + "'");
}

void assign(const Field& f, const Json& value) {
  const std::string where = path_of(f);
  auto type_error = [&](const char* expected) {
    return ConfigError("key '" + where + "' expects " + expected + ", got " + value.type_name());
  };
  std::visit(
      [&](auto* target) {
        using T = std::remove_pointer_t<decltype(target)>;
        if constexpr (std::is_same_v<T, double>) {
          if (value.is_null() && f.nullable) {
            *target = std::numeric_limits<double>::infinity();
          } else {
            if (!value.is_number()) throw type_error("a number");
            *target = value.get<double>();
          }
        } else if constexpr (std::is_same_v<T, std::optional<double>>) {
          if (value.is_null()) {
            target->reset();
          } else {
            if (!value.is_number()) throw type_error("a number or null");
            *target = value.get<double>();
          }
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          if (!value.is_number_integer()) throw type_error("an integer");
          *target = value.get<std::int64_t>();
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
          if (!value.is_number_unsigned()) throw type_error("a non-negative integer");
          *target = value.get<std::uint64_t>();
        } else if constexpr (std::is_same_v<T, bool>) {
          if (!value.is_boolean()) throw type_error("a boolean");
          *target = value.get<bool>();
        } else if constexpr (std::is_same_v<T, std::string>) {
          if (!value.is_string()) throw type_error("a string");
          *target = value.get<std::string>();
        } else {
          if (!value.is_array()) throw type_error("an array of numbers");
          target->clear();
          for (const auto& v : value) {
            if (!v.is_number()) throw type_error("an array of numbers");
            target->push_back(v.get<double>());
          }
        }
      },
      f.target);
}

OrderedJson to_json(const Field& f) {
  return std::visit(
      [&](auto* target) -> OrderedJson {
        using T = std::remove_pointer_t<decltype(target)>;
        if constexpr (std::is_same_v<T, double>) {
          if (f.nullable && std::isinf(*target)) return nullptr;
          return *target;
        } else if constexpr (std::is_same_v<T, std::optional<double>>) {
          if (!target->has_value()) return nullptr;
          return **target;
        } else {
          return *target;
        }
      },
      f.target);
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

std::string to_string(Scenario s) { return kScenarioNames[static_cast<std::size_t>(s)]; }

Scenario parse_scenario(const std::string& name) {
  for (std::size_t i = 0; i < kScenarioNames.size(); ++i)
    if (name == kScenarioNames[i]) return static_cast<Scenario>(i);
  std::string list;
  for (const char* n : kScenarioNames) list += std::string(list.empty() ? "" : ", ") + n;
  throw ConfigError("unknown scenario '" + name + "' (expected one of " + list + ")");
}

std::string to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw ConfigError("unknown output format '" + name + "' (expected csv or json)");
}

bool ScenarioConfig::operator==(const ScenarioConfig& o) const {
  return scenario == o.scenario && seed == o.seed && output == o.output && readout == o.readout &&
         shots == o.shots && sweep == o.sweep && chain == o.chain && network == o.network &&
         spectroscopy == o.spectroscopy && closure == o.closure;
}

void ScenarioConfig::validate() const {
  parse_scenario(scenario);
  parse_format(output.format);

  require(readout.chi_mhz > 0, "readout.chi_mhz must be positive");
  require(readout.kappa_mhz > 0, "readout.kappa_mhz must be positive");
  require(readout.cavity_ghz > 0, "readout.cavity_ghz must be positive");
  require(readout.t1_us > 0, "readout.t1_us must be positive or null");
  require(readout.n_env >= 0, "readout.n_env must be non-negative");
  require(readout.alpha2 >= 0, "readout.alpha2 must be non-negative");
  require(readout.tau_ns > 0, "readout.tau_ns must be positive");
  require(readout.eta_m > 0 && readout.eta_m <= 1, "readout.eta_m must lie in (0, 1]");

  require(shots.per_state >= 1, "shots.per_state must be at least 1");
  require(shots.histogram_bins >= 1, "shots.histogram_bins must be at least 1");
  require(shots.bootstrap_resamples >= 100, "shots.bootstrap_resamples must be at least 100");

  require(sweep.alpha2_list.size() >= 3, "sweep.alpha2_list needs at least 3 values");
  for (double a : sweep.alpha2_list) require(a >= 0, "sweep.alpha2_list values must be non-negative");
  require(!sweep.tau_ns_list.empty(), "sweep.tau_ns_list must not be empty");
  for (double t : sweep.tau_ns_list) require(t > 0, "sweep.tau_ns_list values must be positive");
  require(sweep.shots_per_state >= 2, "sweep.shots_per_state must be at least 2");
  require(sweep.ramsey_shots_per_point >= 1, "sweep.ramsey_shots_per_point must be at least 1");
  require(sweep.ramsey_points >= 4, "sweep.ramsey_points must be at least 4");
  require(sweep.ramsey_span > 0, "sweep.ramsey_span must be positive");
  require(sweep.ramsey_detuning_mhz >= 0, "sweep.ramsey_detuning_mhz must be non-negative");

  require(chain.preset == "directional" || chain.preset == "converter",
          "chain.preset must be 'directional' or 'converter'");
  require(chain.variable_stage == "phase_sensitive" || chain.variable_stage == "phase_preserving",
          "chain.variable_stage must be 'phase_sensitive' or 'phase_preserving'");
  for (double t : {chain.fpja_transmission, chain.converter_transmission, chain.jpa_transmission})
    require(t > 0 && t <= 1, "chain transmissions must lie in (0, 1]");
  require(chain.hemt_added_quanta >= 0, "chain.hemt_added_quanta must be non-negative");
  require(chain.jpa_gain_db >= 0, "chain.jpa_gain_db must be non-negative");
  require(chain.gain_start_db >= 0 && chain.gain_stop_db >= chain.gain_start_db,
          "chain gain range must satisfy 0 <= gain_start_db <= gain_stop_db");
  require(chain.gain_points >= 1, "chain.gain_points must be at least 1");

  require(network.kind == "circulator" || network.kind == "directional",
          "network.kind must be 'circulator' or 'directional'");
  require(network.mode_a_ghz > 0 && network.mode_b_ghz > 0 && network.mode_c_ghz > 0,
          "network mode frequencies must be positive");
  require(network.circulator_kappa_mhz > 0, "network.circulator_kappa_mhz must be positive");
  require(!network.loop_phase_rad || (*network.loop_phase_rad >= 0 && *network.loop_phase_rad < 2 * std::numbers::pi),
          "network.loop_phase_rad must lie in [0, 2 pi)");
  require(network.span_mhz > 0, "network.span_mhz must be positive");
  require(network.points >= 2, "network.points must be at least 2");
  require(network.bath_occupancy >= 0, "network.bath_occupancy must be non-negative");
  require(network.phase_points >= 2, "network.phase_points must be at least 2");
  require(network.amp_gain_db > 0, "network.amp_gain_db must be positive");
  require(network.target_cavity_kappa_mhz > 0, "network.target_cavity_kappa_mhz must be positive");

  const auto& s = spectroscopy;
  require(s.cavity_ghz > 0 && s.cavity_kappa_mhz > 0, "spectroscopy cavity parameters must be positive");
  require(s.resonance_flux_phi0 >= 0 && s.resonance_flux_phi0 < 0.5,
          "spectroscopy.resonance_flux_phi0 must lie in [0, 0.5)");
  require(s.tunable_participation > 0 && s.tunable_participation <= 1,
          "spectroscopy.tunable_participation must lie in (0, 1]");
  require(s.tunable_kappa_mhz >= 0 && s.ladder_kappa_mhz >= 0, "spectroscopy linewidths must be non-negative");
  require(s.tunable_cavity_coupling_mhz >= 0 && s.ladder_coupling_mhz >= 0,
          "spectroscopy couplings must be non-negative");
  require(s.ladder_fsr_mhz > 0, "spectroscopy.ladder_fsr_mhz must be positive");
  require(s.flux_start_phi0 > -0.5 && s.flux_stop_phi0 < 0.5 && s.flux_start_phi0 <= s.flux_stop_phi0,
          "spectroscopy flux range must lie inside (-0.5, 0.5) and be ordered");
  require(s.flux_points >= 2, "spectroscopy.flux_points must be at least 2");

  require(closure.trials >= 1, "closure.trials must be at least 1");
  require(closure.eta_m > 0 && closure.eta_m <= 1, "closure.eta_m must lie in (0, 1]");
  require(closure.n_env >= 0, "closure.n_env must be non-negative");
}

ScenarioConfig parse_config(const std::string& text, const std::string& origin) {
  Json doc;
  try {
    doc = Json::parse(text, nullptr, true, true);
  } catch (const Json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte == 0 ? 1 : e.byte, text.size() + 1);
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string detail = e.what();
    if (const auto pos = detail.find("error: "); pos != std::string::npos) detail = detail.substr(pos + 7);
    throw ConfigParseError(origin + ":" + std::to_string(line) + ":" + std::to_string(column) +
                               ": parse error: " + detail,
                           line, column);
  }
  if (!doc.is_object()) throw ConfigError(origin + ": top level must be an object");

  ScenarioConfig config;
  const auto fs = fields(config);
  for (const auto& f : fs) config.provenance[path_of(f)] = "default: " + f.note;

  for (const auto& [key, value] : doc.items()) {
    if (const Field* f = find_field(fs, "", key)) {
      assign(*f, value);
      config.provenance[key] = "file";
    } else if (is_section(fs, key)) {
      if (!value.is_object()) throw ConfigError("section '" + key + "' must be an object");
      for (const auto& [sub, sub_value] : value.items()) {
        const Field* sf = find_field(fs, key, sub);
        if (!sf) reject_key(fs, key, sub);
        assign(*sf, sub_value);
        config.provenance[key + "." + sub] = "file";
      }
    } else {
      reject_key(fs, "", key);
    }
  }
  config.validate();
  return config;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

std::string serialize_config(const ScenarioConfig& config) {
  ScenarioConfig copy = config;
  OrderedJson doc = OrderedJson::object();
  for (const auto& f : fields(copy)) {
    if (f.section.empty())
      doc[f.key] = to_json(f);
    else
      doc[f.section][f.key] = to_json(f);
  }
  return doc.dump(2) + "\n";
}

std::string config_hash(const ScenarioConfig& config) {
  ScenarioConfig copy = config;
  copy.output = OutputSection{};  // output location does not affect results
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_config(copy)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::pair<std::string, std::string>> config_keys() {
  ScenarioConfig c;
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : fields(c)) out.emplace_back(path_of(f), f.note);
  return out;
}

}  // namespace readout
