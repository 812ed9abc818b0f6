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

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>

#include "readout/config.hpp"
#include "readout/emit.hpp"
#include "readout/parallel.hpp"
#include "readout/scenarios.hpp"

using namespace readout;
namespace fs = std::filesystem;

namespace {

const std::string kPresetDir = READOUT_PRESET_DIR;
const std::string kBinary = READOUT_SIM_BINARY;

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("readout_sim_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

int run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" + kBinary + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ScenarioConfig preset(const std::string& name) { return load_config(kPresetDir + "/" + name); }

}  // namespace

TEST(Emit, EmptyTableIsHeaderOnly) {
  const Table t("empty", {"a", "b", "c"});
  EXPECT_EQ(t.rows(), 0u);
  EXPECT_EQ(table_to_csv(t), "a,b,c\n");
}

TEST(Emit, FullPrecisionScientific) {
  Table t("t", {"x", "y"});
  t.add_row({0.1, -2.5e-300});
  t.add_row({std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::infinity()});
  const std::string csv = table_to_csv(t);
  EXPECT_EQ(csv, "x,y\n1.00000000000000006e-01,-2.49999999999999998e-300\nnan,inf\n");
  EXPECT_EQ(std::stod(format_value(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Emit, TableShapeIsChecked) {
  Table t("t", {"x", "y"});
  EXPECT_THROW(t.add_row({1.0}), Error);
  EXPECT_THROW(t.column("z"), Error);
}

TEST(Emit, JsonRoundTripIsByteIdentical) {
  auto c = preset("readout_histogram.cfg");
  c.shots.per_state = 2000;
  const ResultBundle bundle = run_scenario(c);
  const std::string text = bundle_to_json(bundle);
  const ResultBundle back = bundle_from_json(text);
  EXPECT_EQ(bundle_to_json(back), text);
  EXPECT_EQ(back.metadata, bundle.metadata);
  EXPECT_NE(text.find("\"tables\""), std::string::npos);
  EXPECT_NE(text.find("\"metadata\""), std::string::npos);
  EXPECT_THROW(bundle_from_json("{"), ConfigError);
  EXPECT_THROW(bundle_from_json("{\"tables\": {}}"), ConfigError);
}

TEST(Emit, WritesCsvAndJsonLayouts) {
  auto c = preset("circulator.cfg");
  const ResultBundle bundle = run_scenario(c);
  const auto dir = scratch_dir("layout");
  const auto csv_files = emit(bundle, OutputFormat::csv, dir / "csv");
  ASSERT_EQ(csv_files.size(), bundle.tables.size() + 1);
  EXPECT_EQ(csv_files.back().filename(), "metadata.json");
  EXPECT_EQ(slurp(csv_files.front()), table_to_csv(bundle.tables.front()));
  const auto json_files = emit(bundle, OutputFormat::json, dir / "json");
  ASSERT_EQ(json_files.size(), 1u);
  EXPECT_EQ(slurp(json_files.front()), bundle_to_json(bundle));
}

TEST(Emit, UnwritableDirectoryIsAnIoError) {
  const auto dir = scratch_dir("unwritable");
  write(dir / "file", "x");
  ResultBundle bundle;
  EXPECT_THROW(emit(bundle, OutputFormat::csv, dir / "file" / "sub"), IoError);
}

TEST(Scenarios, MetadataRecordsProvenance) {
  const auto c = preset("spectroscopy.cfg");
  const auto bundle = run_scenario(c);
  EXPECT_EQ(bundle.metadata.tool_version, kToolVersion);
  EXPECT_EQ(bundle.metadata.scenario, "spectroscopy");
  EXPECT_EQ(bundle.metadata.config_hash, config_hash(c));
  EXPECT_EQ(bundle.metadata.master_seed, c.seed);
  EXPECT_GE(bundle.metadata.wall_time_s, 0.0);
}

TEST(Scenarios, EfficiencyCurveSchemaAndShape) {
  auto c = preset("directional_chain.cfg");
  c.chain.estimate = false;
  const auto bundle = run_scenario(c);
  const auto& t = bundle.table("efficiency");
  EXPECT_EQ(t.columns, (std::vector<std::string>{"gain_db", "eta_model", "eta_estimated", "sigma"}));
  ASSERT_EQ(t.rows(), 22u);
  const auto& gain = t.column("gain_db");
  const auto& eta = t.column("eta_model");
  for (std::size_t i = 1; i < t.rows(); ++i) EXPECT_GT(eta[i], eta[i - 1]);
  EXPECT_EQ(gain[15], 15.0);
  EXPECT_GE(eta[15], 0.67);
  EXPECT_LE(eta[15], 0.77);
  EXPECT_TRUE(std::isnan(t.column("eta_estimated")[0]));
}

TEST(Scenarios, EfficiencyCurveEstimatesTrackModel) {
  auto c = preset("directional_chain.cfg");
  c.chain.gain_start_db = 5;
  c.chain.gain_stop_db = 15;
  c.chain.gain_points = 3;
  const auto bundle = run_scenario(c);
  const auto& t = bundle.table("efficiency");
  for (std::size_t i = 0; i < t.rows(); ++i)
    EXPECT_NEAR(t.column("eta_estimated")[i], t.column("eta_model")[i], 3 * t.column("sigma")[i])
        << "gain " << t.column("gain_db")[i];
}

TEST(Scenarios, ClosureWithIdealEfficiencyAndNoRelaxation) {
  auto c = parse_config(R"({"scenario": "closure_test", "seed": 4,
                            "readout": {"t1_us": null},
                            "closure": {"trials": 5, "eta_m": 1.0, "n_env": 0.01}})");
  const auto bundle = run_scenario(c);
  const auto& t = bundle.table("closure");
  ASSERT_EQ(t.rows(), 5u);
  for (std::size_t i = 0; i < t.rows(); ++i)
    EXPECT_NEAR(t.column("eta_estimated")[i], 1.0, 3 * t.column("sigma_eta")[i]);
}

TEST(Scenarios, ReadoutShotsFidelity) {
  const auto bundle = run_scenario(preset("readout_histogram.cfg"));
  const auto& s = bundle.table("summary");
  ASSERT_EQ(s.rows(), 1u);
  EXPECT_GE(s.column("fidelity")[0], 0.96);
  EXPECT_LE(s.column("fidelity")[0], 0.99);
  EXPECT_LT(s.column("fidelity_se")[0], 0.01);
  EXPECT_NEAR(s.column("fidelity")[0], s.column("fidelity_model")[0], 0.01);
  const auto& shots = bundle.table("shots");
  EXPECT_EQ(shots.rows(), 40000u);
  const auto& h = bundle.table("histogram");
  EXPECT_EQ(h.rows(), 100u);
  double total = 0;
  for (double v : h.column("count_g")) total += v;
  EXPECT_EQ(total, 20000.0);
}

TEST(Scenarios, ErrorsCarryScenarioContext) {
  auto c = preset("readout_histogram.cfg");
  c.readout.tau_ns = 100;  // shorter than the discarded ring-up
  try {
    run_scenario(c);
    FAIL() << "expected a domain error";
  } catch (const DomainError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("scenario readout_shots: ", 0), 0u) << e.what();
  }
}

TEST(Determinism, RerunAndThreadCountGiveIdenticalCsv) {
  for (const std::string name : {"ramsey_sweep.cfg", "readout_histogram.cfg", "closure.cfg"}) {
    auto c = preset(name);
    if (c.scenario == "closure_test") c.closure.trials = 3;
    const std::size_t saved = max_threads();
    set_max_threads(1);
    const auto serial = run_scenario(c);
    set_max_threads(4);
    const auto threaded = run_scenario(c);
    const auto again = run_scenario(c);
    set_max_threads(saved);
    ASSERT_EQ(serial.tables.size(), threaded.tables.size());
    for (std::size_t i = 0; i < serial.tables.size(); ++i) {
      EXPECT_EQ(table_to_csv(serial.tables[i]), table_to_csv(threaded.tables[i])) << name;
      EXPECT_EQ(table_to_csv(again.tables[i]), table_to_csv(threaded.tables[i])) << name;
    }
  }
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch_dir("exit");
  const std::string out = " --out \"" + (dir / "out").string() + "\" --quiet";
  EXPECT_EQ(run_cli("--config \"" + kPresetDir + "/circulator.cfg\"" + out), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "metadata.json"));
  write(dir / "bad.cfg", R"({"readout": {"kappa": 2.58}})");
  EXPECT_EQ(run_cli("--config \"" + (dir / "bad.cfg").string() + "\"" + out), 1);
  EXPECT_EQ(run_cli("--config \"" + kPresetDir + "/circulator.cfg\" --scenario nope" + out), 1);
  EXPECT_EQ(run_cli("--config \"" + kPresetDir + "/circulator.cfg\" --format xml" + out), 1);
  EXPECT_EQ(run_cli(out), 1);
  write(dir / "short.cfg", R"({"scenario": "readout_shots", "readout": {"tau_ns": 100}})");
  EXPECT_EQ(run_cli("--config \"" + (dir / "short.cfg").string() + "\"" + out), 2);
  EXPECT_EQ(run_cli("--config \"" + (dir / "missing.cfg").string() + "\"" + out), 3);
  write(dir / "blocker", "x");
  EXPECT_EQ(run_cli("--config \"" + kPresetDir + "/circulator.cfg\" --quiet --out \"" + (dir / "blocker" / "x").string() + "\""), 3);
}

TEST(Cli, SeededRunsAreByteIdenticalAcrossThreadCounts) {
  const auto dir = scratch_dir("bytes");
  const std::string cfg = "--config \"" + kPresetDir + "/ramsey_sweep.cfg\" --seed 17 --quiet";
  ASSERT_EQ(run_cli(cfg + " --out \"" + (dir / "a").string() + "\"", "READOUT_SIM_THREADS=1"), 0);
  ASSERT_EQ(run_cli(cfg + " --out \"" + (dir / "b").string() + "\"", "READOUT_SIM_THREADS=3"), 0);
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    if (entry.path().extension() != ".csv") continue;
    EXPECT_EQ(slurp(entry.path()), slurp(dir / "b" / entry.path().filename())) << entry.path();
    ++compared;
  }
  EXPECT_GE(compared, 4);
  // Metadata differs only in wall time.
  auto a = slurp(dir / "a" / "metadata.json"), b = slurp(dir / "b" / "metadata.json");
  auto strip = [](std::string s) {
    const auto pos = s.find("\"wall_time_s\"");
    return s.substr(0, pos) + s.substr(s.find('\n', pos));
  };
  EXPECT_EQ(strip(a), strip(b));
  EXPECT_NE(a.find("\"master_seed\": 17"), std::string::npos);
}
