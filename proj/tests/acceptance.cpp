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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure or runtime overrun.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "readout/config.hpp"
#include "readout/coupled_mode.hpp"
#include "readout/emit.hpp"
#include "readout/estimation.hpp"
#include "readout/network_presets.hpp"
#include "readout/noise_cascade.hpp"
#include "readout/parallel.hpp"
#include "readout/scenarios.hpp"

using namespace readout;
using units::mhz;

namespace {

const std::string kPresetDir = READOUT_PRESET_DIR;

struct Outcome {
  bool pass{};
  std::string detail;
};

struct Check {
  bool ok{true};
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
    if (!cond) {
      ok = false;
      detail += " [x]";
    }
  }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Reported readout parameters: 2 chi / 2 pi = 1.7 MHz, kappa / 2 pi = 2.58 MHz.
const DispersiveParams<> kDisp = DispersiveParams<>::from_total_splitting(mhz(1.7), mhz(2.58), units::ghz(10.929));

double eta_at(const NoiseChain<>& chain, double db) { return efficiency_vs_gain(chain, std::vector<double>{db})[0].eta; }

Check criterion1() {
  Check c;
  // Steady-state cavity fields for g and e under a drive centered between the
  // two dressed frequencies: alpha_{g,e} = eps / (kappa/2 -+ i chi).
  const std::complex<double> eps(1e6, 0.0);
  const std::complex<double> a_g = eps / std::complex<double>(kDisp.kappa / 2, -kDisp.chi);
  const std::complex<double> a_e = eps / std::complex<double>(kDisp.kappa / 2, kDisp.chi);
  const double n = std::norm(a_g);
  const double brute_meas = kDisp.kappa / 2 * std::norm(a_g - a_e) / n;
  const double meas = dephasing_meas(kDisp, 1.0);
  const double env = dephasing_env(kDisp, 1.0);
  // Frozen 30-digit evaluations.
  const double oracle_meas = 9814943.07537761516;
  const double oracle_env = 4907471.53768880758;
  c.expect(rel(meas, brute_meas) < 1e-12, fmt("meas vs field picture rel %.1e", rel(meas, brute_meas)));
  c.expect(rel(meas, oracle_meas) < 1e-12, fmt("meas vs oracle rel %.1e", rel(meas, oracle_meas)));
  c.expect(rel(env, oracle_env) < 1e-12, fmt("env vs oracle rel %.1e", rel(env, oracle_env)));
  c.expect(std::abs(units::to_mhz(meas) - 1.56) < 0.005, fmt("meas = 2pi x %.4f MHz", units::to_mhz(meas)));
  c.expect(std::abs(units::to_mhz(env) - 0.781) < 0.0005, fmt("env = 2pi x %.5f MHz", units::to_mhz(env)));
  return c;
}

Check criterion2() {
  Check c;
  const auto chain = chain_presets::converter();
  const double high = eta_at(chain, 40.0), low = eta_at(chain, 0.0);
  c.expect(std::abs(high - 0.459) <= 0.005, fmt("eta(40 dB) = %.4f vs 0.459 +- 0.005", high));
  c.expect(low < 0.02, fmt("eta(0 dB) = %.4f < 0.02", low));
  return c;
}

Check criterion3() {
  Check c;
  const double eta = eta_at(chain_presets::directional(), 15.0);
  c.expect(eta >= 0.67 && eta <= 0.77, fmt("eta(15 dB) = %.4f in [0.67, 0.77]", eta));
  return c;
}

Check criterion4() {
  Check c;
  QubitSpec<> q;
  q.t1 = units::us(27.0);
  q.n_env = 0.01;
  MeasurementConfig<> m;
  m.tau = units::ns(350);
  SweepPlan plan;
  plan.alpha2_grid = {0.05, 0.1, 0.15, 0.2, 0.25, 0.3};
  plan.tau_grid = {units::ns(350)};
  plan.shots_per_state = 10000;
  plan.ramsey_shots_per_point = 10000;
  const auto data = sweep_measurement_strength(kDisp, q, m, 0.72, plan, {20240601});
  const auto a = analyze_sweep(data, kDisp, q);
  const auto& e = a.efficiency;
  c.expect(plan.alpha2_grid.size() >= 5, fmt("%.0f alpha2 values", static_cast<double>(plan.alpha2_grid.size())));
  c.expect(std::abs(e.eta_m - 0.72) <= 3 * e.sigma_eta, fmt("eta = %.4f +- %.4f vs 0.72", e.eta_m, e.sigma_eta));
  const double slope_sigma = e.gamma2_fit.sigma_slope();
  c.expect(std::abs(e.gamma_phi_slope - e.model_dephasing_slope) <= 3 * slope_sigma,
           fmt("Gamma2 slope %.4e +- %.2e vs %.4e", e.gamma_phi_slope, slope_sigma, e.model_dephasing_slope));
  return c;
}

Check criterion5() {
  Check c;
  const auto bundle = run_scenario(load_config(kPresetDir + "/readout_histogram.cfg"));
  const auto& s = bundle.table("summary");
  const double f = s.column("fidelity")[0], model = s.column("fidelity_model")[0];
  c.expect(f >= 0.96 && f <= 0.99, fmt("F_mc = %.4f in [0.96, 0.99]", f));
  c.expect(std::abs(f - model) <= 0.01, fmt("|F_model - F_mc| = |%.4f - %.4f| <= 0.01", model, f));
  return c;
}

Check criterion6() {
  Check c;
  const double n = extract_n_env(1 / units::us(17.0), 1 / units::us(27.0), kDisp).n_env;
  c.expect(n >= 0.007 && n <= 0.012, fmt("n_env = %.5f in [0.007, 0.012]", n));
  const double eta = efficiency_env(0.01);
  c.expect(std::abs(eta - 0.9804) < 5e-5, fmt("eta_env(0.01) = %.6f", eta));
  const double inv = n_env_from_efficiency(0.88);
  c.expect(std::abs(inv - 0.068) <= 1e-3, fmt("n_env(eta_env = 0.88) = %.5f", inv));
  return c;
}

Check criterion7() {
  Check c;
  // Unitarity of random passive lossless networks on a 1000-point grid.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> rate(1.0, 30.0), phase(0.0, 2 * std::numbers::pi);
  double worst = 0;
  for (int trial = 0; trial < 10; ++trial) {
    NetworkSpec net;
    const int n = 3 + trial % 2;
    for (int i = 0; i < n; ++i) net.modes.push_back({"m" + std::to_string(i), units::ghz(5.0 + 1.3 * i), mhz(rate(rng)), 0.0});
    for (int i = 0; i < n; ++i)
      net.drives.push_back({DriveKind::conversion, "m" + std::to_string(i), "m" + std::to_string((i + 1) % n),
                            mhz(rate(rng) / 2), phase(rng), std::nullopt});
    net.probe_port = "m0";
    const CoupledModeNetwork network(net);
    for (int k = 0; k < 1000; ++k) {
      const Eigen::MatrixXcd s = network.scattering_at_detuning(mhz(-100.0 + 0.2 * k)).s_matrix;
      worst = std::max(worst, (s.adjoint() * s - Eigen::MatrixXcd::Identity(s.rows(), s.cols())).norm());
    }
  }
  c.expect(worst < 1e-10, fmt("max ||S^dag S - I|| = %.1e", worst));

  CirculatorDesign design;
  const auto s = CoupledModeNetwork(circulator_network(design)).scattering_at_detuning(0.0);
  const double forward = std::abs(s.signal(s.port_index("b"), s.port_index("a")));
  const double backward = std::abs(s.signal(s.port_index("a"), s.port_index("b")));
  const double isolation = backward > 0 ? 20 * std::log10(forward / backward) : INFINITY;
  c.expect(isolation >= 20, fmt("isolation at pi/2 = %.1f dB", std::min(isolation, 999.0)));
  design.loop_phase = 0.0;
  const auto r = CoupledModeNetwork(circulator_network(design)).scattering_at_detuning(0.0);
  const double asym = std::abs(std::abs(r.signal(1, 0)) - std::abs(r.signal(0, 1)));
  c.expect(asym < 1e-10, fmt("||S12| - |S21|| at phase 0 = %.1e", asym));

  const auto bundle = run_scenario(load_config(kPresetDir + "/occupancy.cfg"));
  const auto& occ = bundle.table("occupancy").column("occupancy");
  const std::size_t m = occ.size();
  int minima = 0;
  for (std::size_t k = 0; k < m; ++k) minima += occ[k] < occ[(k + m - 1) % m] && occ[k] < occ[(k + 1) % m];
  double pi_shift = 0;
  for (std::size_t k = 0; k < m; ++k) pi_shift = std::max(pi_shift, std::abs(occ[k] - occ[(k + m / 2) % m]));
  c.expect(minima == 1, fmt("%.0f local minimum over [0, 2pi)", minima));
  c.expect(m % 2 == 0 && pi_shift > 0.01, fmt("max |n(phi) - n(phi + pi)| = %.3g", pi_shift));
  return c;
}

Check criterion8() {
  Check c;
  const NoiseChain<> ideal{{ChainStage<>::variable_gain(StageKind::phase_preserving_gain)}};
  const double cap = eta_at(ideal, 40.0);
  const double directional = eta_at(chain_presets::directional(), 15.0);
  c.expect(std::abs(cap - 0.5) <= 1e-3, fmt("eta(40 dB) = %.6f", cap));
  c.expect(cap < directional, fmt("below directional %.4f", directional));
  return c;
}

Check criterion9() {
  Check c;
  const std::size_t saved = max_threads();
  int identical = 0, total = 0;
  for (const char* name : {"readout_histogram.cfg", "ramsey_sweep.cfg", "directional_chain.cfg", "closure.cfg",
                           "fidelity.cfg", "spectroscopy.cfg"}) {
    auto config = load_config(kPresetDir + "/" + name);
    std::string digest[3];
    const std::size_t threads[3] = {1, 4, 1};
    for (int run = 0; run < 3; ++run) {
      set_max_threads(threads[run]);
      ScenarioConfig copy = config;
      for (const auto& t : run_scenario(copy).tables) digest[run] += t.name + "\n" + table_to_csv(t);
    }
    ++total;
    identical += digest[0] == digest[1] && digest[0] == digest[2];
  }
  set_max_threads(saved);
  c.expect(identical == total, fmt("%.0f of %.0f scenarios byte-identical across reruns and 1/4 threads", identical, total));
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Check()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "dephasing arithmetic", 1, criterion1},
      {2, "converter efficiency plateau", 1, criterion2},
      {3, "directional efficiency", 1, criterion3},
      {4, "pipeline closure", 60, criterion4},
      {5, "fidelity reproduction", 30, criterion5},
      {6, "n_env extraction", 1, criterion6},
      {7, "scattering properties", 30, criterion7},
      {8, "phase-insensitive cap", 1, criterion8},
      {9, "determinism", 60, criterion9},
  };
  int failures = 0;
  for (const auto& cr : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Check result;
    try {
      result = cr.run();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail = std::string("exception: ") + e.what();
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = elapsed < cr.budget_s;
    const bool pass = result.ok && in_time;
    failures += !pass;
    std::printf("criterion %d %-30s %s  %.3f s (limit %.0f s)  %s\n", cr.id, cr.name, pass ? "PASS" : "FAIL", elapsed,
                cr.budget_s, result.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
