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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "readout/errors.hpp"
#include "readout/flux_tuning.hpp"
#include "readout/units.hpp"

using namespace readout;
using units::ghz;
using units::mhz;

namespace {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

// Tunable mode crossing a fixed cavity at flux 0.219 with equal linewidths.
SpectroscopyModel crossing_model(double g, double kappa_t = mhz(5.0), double kappa_c = mhz(5.0)) {
  SpectroscopyModel model;
  const double p = 0.5;
  model.tunable = {{"tunable", omega_max_for_resonance(p, 0.219, ghz(10.929)), p, kappa_t, 0.0}};
  model.fixed = {{"cavity", ghz(10.929), kappa_c, 0.0}};
  model.couplings = {{{"tunable", "cavity"}, g}};
  return model;
}

}  // namespace

TEST(SquidFrequency, ZeroFluxIsMaximum) {
  EXPECT_DOUBLE_EQ(squid_frequency({ghz(12.0), 0.7, 0.0}), ghz(12.0));
}

TEST(SquidFrequency, UntunableLimit) {
  for (double flux : {0.0, 0.1, 0.3, 0.49, -0.2}) EXPECT_DOUBLE_EQ(squid_frequency({ghz(12.0), 0.0, flux}), ghz(12.0));
}

TEST(SquidFrequency, ClosedFormAtQuarterFlux) {
  // p sqrt(cos(pi/4)) + 1 - p with p = 0.5: 0.5 * 2^(-1/4) + 0.5.
  EXPECT_NEAR(squid_frequency({1.0, 0.5, 0.25}), 0.920448207626857, 1e-14);
  EXPECT_NEAR(squid_frequency({1.0, 1.0, -0.25}), 0.840896415253715, 1e-14);
}

TEST(SquidFrequency, ResonanceAtReportedFlux) {
  for (double p : {0.3, 0.5, 1.0}) {
    const double omega_max = omega_max_for_resonance(p, 0.219, ghz(10.929));
    EXPECT_NEAR(squid_frequency({omega_max, p, 0.219}) / ghz(10.929), 1.0, 1e-14);
    EXPECT_NEAR(resonance_flux({omega_max, p, 0.0}, ghz(10.929)), 0.219, 1e-9);
  }
}

TEST(SquidFrequency, OutOfModelFlux) {
  EXPECT_THROW(squid_frequency({ghz(12.0), 1.0, 0.5}), DomainError);
  EXPECT_THROW(squid_frequency({ghz(12.0), 1.0, -0.7}), DomainError);
  EXPECT_THROW(squid_frequency({ghz(12.0), 1.5, 0.1}), DomainError);
  EXPECT_THROW(squid_frequency({0.0, 0.5, 0.1}), DomainError);
  EXPECT_THROW(resonance_flux({ghz(10.0), 0.5, 0.0}, ghz(11.0)), DomainError);
}

TEST(SquidFrequencyProperty, MonotoneInAbsoluteFlux) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> part(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double p = part(rng);
    double prev = INFINITY;
    for (double flux : linspace(0.0, 0.499, 500)) {
      const double w = squid_frequency({ghz(11.0), p, flux});
      ASSERT_LE(w, prev);
      ASSERT_DOUBLE_EQ(w, squid_frequency({ghz(11.0), p, -flux}));
      prev = w;
    }
  }
}

TEST(Ladder, CountOverTwoFsrWidth) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> start(ghz(9.0), ghz(11.0));
  const SpuriousLadder ladder{mhz(535.0), ghz(10.7), mhz(5.0), {}, mhz(15.0)};
  for (int trial = 0; trial < 200; ++trial) {
    const double lo = start(rng);
    const auto f = ladder_frequencies(ladder, lo, lo + ghz(1.07));
    ASSERT_GE(f.size(), 2u);
    ASSERT_LE(f.size(), 3u);
    ASSERT_TRUE(std::is_sorted(f.begin(), f.end()));
    for (double w : f) {
      ASSERT_GE(w, lo);
      ASSERT_LE(w, lo + ghz(1.07));
      const double k = (w - ladder.anchor) / ladder.fsr;
      ASSERT_NEAR(k, std::round(k), 1e-9);
    }
  }
}

TEST(Ladder, EmptyAndSingle) {
  const SpuriousLadder ladder{mhz(535.0), ghz(10.7), mhz(5.0), {}, 0.0};
  EXPECT_TRUE(ladder_frequencies(ladder, ghz(10.71), ghz(11.2)).empty());
  const auto one = ladder_frequencies(ladder, ghz(10.5), ghz(10.9));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_DOUBLE_EQ(one[0], ghz(10.7));
  EXPECT_THROW(ladder_frequencies(ladder, ghz(11.0), ghz(10.0)), DomainError);
}

TEST(Ladder, ValidationAndCouplings) {
  SpuriousLadder ladder{0.0, ghz(10.7), mhz(5.0), {}, 0.0};
  EXPECT_THROW(ladder.validate(), ConfigError);
  ladder.fsr = mhz(535.0);
  ladder.couplings = {{1, mhz(3.0)}};
  ladder.default_coupling = mhz(15.0);
  EXPECT_NO_THROW(ladder.validate());
  EXPECT_DOUBLE_EQ(ladder.coupling(1), mhz(3.0));
  EXPECT_DOUBLE_EQ(ladder.coupling(0), mhz(15.0));
  ladder.couplings[2] = -1.0;
  EXPECT_THROW(ladder.validate(), ConfigError);
}

TEST(Hybridization, ZeroCouplingsReturnBareModes) {
  const std::vector<ModeSpec> bare{{"x", ghz(9.0), mhz(2.0), mhz(1.0)}, {"y", ghz(8.0), mhz(4.0), 0.0}};
  const auto s = hybridized_spectrum(bare, Eigen::MatrixXd::Zero(2, 2));
  ASSERT_EQ(s.eigenfrequencies.size(), 2);
  EXPECT_DOUBLE_EQ(s.eigenfrequencies[0], ghz(8.0));
  EXPECT_DOUBLE_EQ(s.eigenfrequencies[1], ghz(9.0));
  EXPECT_NEAR(s.eigenlinewidths[0], mhz(4.0), 1e-6);
  EXPECT_NEAR(s.eigenlinewidths[1], mhz(3.0), 1e-6);
  EXPECT_NEAR(s.participations(0, 1), 1.0, 1e-12);
  EXPECT_NEAR(s.participations(1, 0), 1.0, 1e-12);
}

TEST(Hybridization, DegenerateLosslessPairSplitsByTwoG) {
  for (double g : {mhz(1.0), mhz(10.0), mhz(100.0)}) {
    const std::vector<ModeSpec> bare{{"x", ghz(9.0), 0.0, 0.0}, {"y", ghz(9.0), 0.0, 0.0}};
    Eigen::MatrixXd c(2, 2);
    c << 0, g, g, 0;
    const auto s = hybridized_spectrum(bare, c);
    EXPECT_NEAR((s.eigenfrequencies[1] - s.eigenfrequencies[0]) / (2 * g), 1.0, 1e-9);
    EXPECT_NEAR(s.participations(0, 0), 0.5, 1e-9);
  }
}

TEST(Hybridization, RejectsBadCouplings) {
  const std::vector<ModeSpec> bare{{"x", ghz(9.0), 0.0, 0.0}, {"y", ghz(9.0), 0.0, 0.0}};
  Eigen::MatrixXd c(2, 2);
  c << 0, 1.0, 2.0, 0;
  EXPECT_THROW(hybridized_spectrum(bare, c), ConfigError);
  EXPECT_THROW(hybridized_spectrum(bare, Eigen::MatrixXd::Zero(3, 3)), ConfigError);
}

TEST(HybridizationProperty, TraceAndNormalization) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> freq(ghz(8.0), ghz(12.0)), rate(0.0, mhz(30.0));
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 6;
    std::vector<ModeSpec> bare;
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
    double sum_w = 0, sum_k = 0;
    for (int i = 0; i < n; ++i) {
      bare.push_back({"m", freq(rng), rate(rng), rate(rng)});
      sum_w += bare.back().omega;
      sum_k += bare.back().kappa();
      for (int j = 0; j < i; ++j) c(i, j) = c(j, i) = rate(rng) * 3;
    }
    const auto s = hybridized_spectrum(bare, c);
    ASSERT_EQ(s.eigenfrequencies.size(), n);
    ASSERT_NEAR(s.eigenfrequencies.sum() / sum_w, 1.0, 1e-9);
    ASSERT_NEAR(s.eigenlinewidths.sum() / sum_k, 1.0, 1e-9);
    for (int k = 0; k < n; ++k) ASSERT_NEAR(s.participations.row(k).sum(), 1.0, 1e-12);
  }
}

TEST(FluxSweep, SingleTunableFollowsSquidCurve) {
  SpectroscopyModel model;
  model.tunable = {{"t", ghz(12.0), 0.6, mhz(10.0), 0.0}};
  const auto fluxes = linspace(-0.3, 0.45, 40);
  const auto sweep = flux_sweep(model, fluxes);
  ASSERT_EQ(sweep.spectra.size(), fluxes.size());
  for (std::size_t i = 0; i < fluxes.size(); ++i) {
    EXPECT_DOUBLE_EQ(sweep.spectra[i].eigenfrequencies[0], squid_frequency({ghz(12.0), 0.6, fluxes[i]}));
    EXPECT_NEAR(sweep.spectra[i].eigenlinewidths[0], mhz(10.0), 1e-6);
  }
}

TEST(FluxSweep, AvoidedCrossingAtResonanceFlux) {
  const double g = mhz(10.0);
  const auto fluxes = linspace(0.15, 0.3, 3001);
  const auto sweep = flux_sweep(crossing_model(g), fluxes);
  double min_gap = INFINITY, at = 0;
  for (std::size_t i = 0; i < fluxes.size(); ++i) {
    const auto& w = sweep.spectra[i].eigenfrequencies;
    const double gap = std::abs(w[1] - w[0]);
    if (gap < min_gap) {
      min_gap = gap;
      at = fluxes[i];
    }
    ASSERT_GE(gap, 2 * g * (1 - 1e-9));
  }
  EXPECT_NEAR(at, 0.219, 1e-4);
  EXPECT_NEAR(min_gap / (2 * g), 1.0, 1e-4);
}

TEST(FluxSweep, BranchesExchangeCharacterAcrossCrossing) {
  const auto fluxes = linspace(0.15, 0.3, 601);
  const auto sweep = flux_sweep(crossing_model(mhz(10.0), mhz(20.0), mhz(2.58)), fluxes);
  // Branch 0 starts tunable-like (tunable is above the cavity at low flux) and ends cavity-like.
  const auto& first = sweep.spectra.front();
  const auto& last = sweep.spectra.back();
  for (Eigen::Index b = 0; b < 2; ++b) {
    const bool starts_tunable = first.participations(b, 0) > 0.9;
    EXPECT_TRUE(starts_tunable || first.participations(b, 1) > 0.9);
    EXPECT_GT(starts_tunable ? last.participations(b, 1) : last.participations(b, 0), 0.9);
    // Linewidth follows the participation-weighted mix of the bare rates.
    for (const auto& s : sweep.spectra)
      ASSERT_NEAR(s.eigenlinewidths[b], s.participations(b, 0) * mhz(20.0) + s.participations(b, 1) * mhz(2.58),
                  0.05 * mhz(20.0));
  }
  // Cavity-like branch linewidth peaks near the crossing.
  Eigen::Index cavity_branch = first.participations(0, 1) > 0.5 ? 0 : 1;
  double peak = 0, at = 0;
  for (std::size_t i = 0; i < fluxes.size(); ++i) {
    // Only the part of the sweep where the branch is still mostly cavity.
    if (sweep.spectra[i].participations(cavity_branch, 1) < 0.5) continue;
    if (sweep.spectra[i].eigenlinewidths[cavity_branch] > peak) {
      peak = sweep.spectra[i].eigenlinewidths[cavity_branch];
      at = fluxes[i];
    }
  }
  EXPECT_NEAR(at, 0.219, 0.01);
  EXPECT_GT(peak, 3 * mhz(2.58));
}

TEST(FluxSweepProperty, BranchesAreContinuous) {
  const auto fluxes = linspace(0.0, 0.35, 1401);
  SpectroscopyModel model = crossing_model(mhz(10.0), mhz(20.0), mhz(2.58));
  model.ladder = SpuriousLadder{mhz(535.0), ghz(10.7), mhz(5.0), {}, mhz(15.0)};
  const auto sweep = flux_sweep(model, fluxes);
  const double step = fluxes[1] - fluxes[0];
  // Largest |d omega / d flux| of the tunable bare curve on this range.
  double max_slope = 0;
  const auto& t = model.tunable[0];
  for (std::size_t i = 1; i < fluxes.size(); ++i)
    max_slope = std::max(max_slope, std::abs(squid_frequency({t.omega_max, t.participation, fluxes[i]}) -
                                             squid_frequency({t.omega_max, t.participation, fluxes[i - 1]})) / step);
  for (std::size_t i = 1; i < fluxes.size(); ++i) {
    const auto d = (sweep.spectra[i].eigenfrequencies - sweep.spectra[i - 1].eigenfrequencies).cwiseAbs();
    ASSERT_LT(d.maxCoeff(), 1.5 * step * max_slope) << "flux " << fluxes[i];
  }
}

TEST(FluxSweepProperty, GapBoundOverRandomCouplings) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> coupling(mhz(1.0), mhz(40.0));
  const auto fluxes = linspace(0.1, 0.35, 501);
  for (int trial = 0; trial < 20; ++trial) {
    const double g = coupling(rng);
    const auto sweep = flux_sweep(crossing_model(g, mhz(4.0), mhz(4.0)), fluxes);
    for (const auto& s : sweep.spectra) ASSERT_GE(std::abs(s.eigenfrequencies[1] - s.eigenfrequencies[0]), 2 * g - 1e-9 * 2 * g);
  }
}

TEST(FluxSweep, LadderAddsModesWithTrackedLabels) {
  SpectroscopyModel model = crossing_model(mhz(10.0));
  model.ladder = SpuriousLadder{mhz(535.0), ghz(10.7), mhz(5.0), {{0, mhz(2.0)}}, mhz(15.0)};
  const auto fluxes = linspace(0.0, 0.3, 31);
  const auto sweep = flux_sweep(model, fluxes);
  ASSERT_GT(sweep.bare_labels.size(), 2u);
  EXPECT_EQ(sweep.bare_labels[0], "tunable");
  EXPECT_EQ(sweep.bare_labels[1], "cavity");
  for (const auto& s : sweep.spectra) EXPECT_EQ(static_cast<std::size_t>(s.eigenfrequencies.size()), sweep.bare_labels.size());
}

TEST(FluxSweep, Errors) {
  SpectroscopyModel model = crossing_model(mhz(10.0));
  const std::vector<double> empty;
  EXPECT_THROW(flux_sweep(model, empty), DomainError);
  const std::vector<double> fluxes{0.1};
  EXPECT_THROW(flux_sweep(SpectroscopyModel{}, fluxes), ConfigError);
  model.couplings.push_back({{"cavity", "nope"}, 1.0});
  EXPECT_THROW(flux_sweep(model, fluxes), ConfigError);
  model.couplings.back() = {{"cavity", "cavity"}, 1.0};
  EXPECT_THROW(flux_sweep(model, fluxes), ConfigError);
  const std::vector<double> bad{0.6};
  EXPECT_THROW(flux_sweep(crossing_model(mhz(10.0)), bad), DomainError);
}
