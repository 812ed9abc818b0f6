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

// readout-sim: runs one named scenario from a configuration file and writes
// its tables.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime or physics error,
// 3 I/O error.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "readout/config.hpp"
#include "readout/emit.hpp"
#include "readout/errors.hpp"
#include "readout/scenarios.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitIo = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate dispersive qubit readout through a parametric amplifier chain"};
  std::string config_path;
  std::string scenario;
  std::string out_dir;
  std::string format;
  std::uint64_t seed = 0;
  bool quiet = false;
  app.add_option("--config", config_path, "Scenario configuration file")->required();
  auto* scenario_opt = app.add_option("--scenario", scenario, "Scenario name (overrides the config)");
  auto* seed_opt = app.add_option("--seed", seed, "Master seed (overrides the config)");
  auto* out_opt = app.add_option("--out", out_dir, "Output directory (overrides the config)");
  auto* format_opt =
      app.add_option("--format", format, "Output format (overrides the config)")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--quiet", quiet, "Print nothing on success");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    readout::ScenarioConfig config = readout::load_config(config_path);
    if (*scenario_opt) config.scenario = scenario;
    if (*seed_opt) config.seed = seed;
    if (*out_opt) config.output.dir = out_dir;
    if (*format_opt) config.output.format = format;
    config.validate();

    const readout::ResultBundle bundle = readout::run_scenario(config);
    const auto files = readout::emit(bundle, readout::parse_format(config.output.format), config.output.dir);
    if (!quiet) {
      std::printf("%s: %zu table(s) in %.3f s, config %s, seed %llu\n", config.scenario.c_str(),
                  bundle.tables.size(), bundle.metadata.wall_time_s, bundle.metadata.config_hash.c_str(),
                  static_cast<unsigned long long>(config.seed));
      for (const auto& w : bundle.metadata.warnings) std::printf("warning: %s\n", w.c_str());
      for (const auto& f : files) std::printf("  %s\n", f.string().c_str());
    }
    return 0;
  } catch (const readout::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const readout::IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
}
