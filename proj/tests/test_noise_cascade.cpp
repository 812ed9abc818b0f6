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
#include <random>

#include <gtest/gtest.h>

#include "readout/noise_cascade.hpp"

using namespace readout;
using Stage = ChainStage<>;

namespace {

NoiseChain<> random_chain(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  std::uniform_real_distribution<double> gain_db(0.0, 30.0);
  NoiseChain<> chain;
  for (std::size_t i = 0; i < n; ++i) {
    switch (kind(rng)) {
      case 0: chain.stages.push_back(Stage::loss(unit(rng))); break;
      case 1: chain.stages.push_back(Stage::phase_sensitive(units::db_to_power(gain_db(rng)))); break;
      case 2: chain.stages.push_back(Stage::phase_preserving(units::db_to_power(gain_db(rng)))); break;
      default: chain.stages.push_back(Stage::added_noise(50 * unit(rng))); break;
    }
  }
  return chain;
}

double eta_at(NoiseChain<> chain, double db) { return efficiency_vs_gain(chain, {db}).front().eta; }

}  // namespace

TEST(NoiseCascade, IdentityChain) {
  const auto r = propagate(NoiseChain<>{{Stage::loss(1.0)}});
  EXPECT_EQ(r.n_sys, 0.0);
  EXPECT_EQ(r.eta, 1.0);
}

TEST(NoiseCascade, PreAmplificationLossLimit) {
  for (double a : {0.3, 0.59, 0.9}) {
    const NoiseChain<> chain{{Stage::loss(a), Stage::phase_sensitive(1e12), Stage::added_noise(100.0)}};
    EXPECT_NEAR(propagate(chain).eta, a, 1e-9);
  }
}

TEST(NoiseCascade, ConverterChainValues) {
  const auto chain = chain_presets::converter();
  // Independent high-precision evaluations of the cascade rules.
  EXPECT_NEAR(eta_at(chain, 0.0), 0.00629041095890410959, 1e-15);
  EXPECT_NEAR(eta_at(chain, 30.0), 0.428358208955223881, 1e-14);
  EXPECT_NEAR(eta_at(chain, 40.0), 0.455917394757744241, 1e-14);
  EXPECT_NEAR(propagate(NoiseChain<>{{Stage::loss(0.82), Stage::loss(0.56), Stage::phase_sensitive(1e15),
                                      Stage::added_noise(36.0)}})
                  .eta,
              0.82 * 0.56, 1e-10);
  EXPECT_LT(eta_at(chain, 0.0), 0.02);
  EXPECT_NEAR(eta_at(chain, 40.0), 0.459, 0.005);
}

TEST(NoiseCascade, DirectionalChainValues) {
  const auto chain = chain_presets::directional();
  EXPECT_NEAR(eta_at(chain, 0.0), 0.158103969810761905, 1e-14);
  EXPECT_NEAR(eta_at(chain, 15.0), 0.684588133652041281, 1e-14);
  EXPECT_NEAR(eta_at(chain, 21.0), 0.745273818735307995, 1e-14);
  EXPECT_GE(eta_at(chain, 15.0), 0.67);
  EXPECT_LE(eta_at(chain, 15.0), 0.77);
}

TEST(NoiseCascade, PhasePreservingCap) {
  NoiseChain<> chain{{Stage::variable_gain(StageKind::phase_preserving_gain)}};
  EXPECT_NEAR(eta_at(chain, 40.0), 0.500025001250062503, 1e-14);
  EXPECT_NEAR(eta_at(chain, 80.0), 0.5, 1e-7);
  EXPECT_LT(eta_at(chain, 40.0), eta_at(chain_presets::directional(), 15.0));
}

TEST(NoiseCascade, SweepRequiresOneVariableGainStage) {
  NoiseChain<> none{{Stage::loss(0.5), Stage::phase_sensitive(10.0)}};
  EXPECT_THROW(efficiency_vs_gain(none, {0.0}), ConfigError);
  NoiseChain<> two{{Stage::variable_gain(StageKind::phase_sensitive_gain),
                    Stage::variable_gain(StageKind::phase_sensitive_gain)}};
  EXPECT_THROW(efficiency_vs_gain(two, {0.0}), ConfigError);
  NoiseChain<> lossy{{Stage{StageKind::loss, 0.5, true}}};
  EXPECT_THROW(efficiency_vs_gain(lossy, {0.0}), ConfigError);
}

TEST(NoiseCascade, StageValidation) {
  EXPECT_THROW(propagate(NoiseChain<>{}), DomainError);
  EXPECT_THROW(propagate(NoiseChain<>{{Stage::loss(0.0)}}), DomainError);
  EXPECT_THROW(propagate(NoiseChain<>{{Stage::loss(1.2)}}), DomainError);
  EXPECT_THROW(propagate(NoiseChain<>{{Stage::phase_sensitive(0.5)}}), DomainError);
  EXPECT_THROW(propagate(NoiseChain<>{{Stage::added_noise(-1.0)}}), DomainError);
}

TEST(NoiseCascadeProperty, EfficiencyInUnitInterval) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const auto chain = random_chain(rng, 1 + trial % 7);
    const double eta = propagate(chain).eta;
    EXPECT_GT(eta, 0.0);
    EXPECT_LE(eta, 1.0 + 1e-12);
  }
}

TEST(NoiseCascadeProperty, UnitEfficiencyOnlyWithoutNoiseSources) {
  const NoiseChain<> ideal{{Stage::loss(1.0), Stage::phase_sensitive(100.0), Stage::loss(1.0)}};
  EXPECT_NEAR(propagate(ideal).eta, 1.0, 1e-15);
  EXPECT_LT(propagate(NoiseChain<>{{Stage::loss(0.99)}}).eta, 1.0);
  EXPECT_LT(propagate(NoiseChain<>{{Stage::phase_preserving(2.0)}}).eta, 1.0);
  EXPECT_LT(propagate(NoiseChain<>{{Stage::added_noise(0.01)}}).eta, 1.0);
  // Loss after a large phase-sensitive gain is almost free.
  EXPECT_GT(propagate(NoiseChain<>{{Stage::phase_sensitive(1e12), Stage::added_noise(10.0)}}).eta, 1 - 1e-9);
}

TEST(NoiseCascadeProperty, OrderingAroundInfiniteGain) {
  const double a = 0.6;
  const double eta_rest = propagate(NoiseChain<>{{Stage::loss(0.8), Stage::phase_sensitive(1e14)}}).eta;
  const NoiseChain<> before{{Stage::loss(a), Stage::loss(0.8), Stage::phase_sensitive(1e14), Stage::loss(0.3)}};
  const NoiseChain<> after{{Stage::loss(0.8), Stage::phase_sensitive(1e14), Stage::loss(a), Stage::loss(0.3)}};
  EXPECT_NEAR(propagate(before).eta, a * eta_rest, 1e-10);
  EXPECT_NEAR(propagate(after).eta, eta_rest, 1e-10);
}

TEST(NoiseCascadeProperty, HighGainSaturation) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.2, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double a1 = unit(rng), a2 = unit(rng);
    NoiseChain<> chain{{Stage::loss(a1), Stage::loss(a2), Stage::variable_gain(StageKind::phase_sensitive_gain),
                        Stage::added_noise(40 * unit(rng)), Stage::loss(unit(rng))}};
    double previous = 0.0;
    for (double db = 0.0; db <= 40.0; db += 1.0) {
      const double eta = eta_at(chain, db);
      EXPECT_GE(eta, previous - 1e-15);
      previous = eta;
    }
    EXPECT_NEAR(previous, a1 * a2, 0.01 * a1 * a2);
  }
}

TEST(NoiseCascadeProperty, CompositionIsAssociative) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const auto first = random_chain(rng, 1 + trial % 4);
    const auto second = random_chain(rng, 1 + trial % 5);
    NoiseChain<> joined = first;
    joined.stages.insert(joined.stages.end(), second.stages.begin(), second.stages.end());
    const auto whole = propagate(joined);
    const auto split = propagate(second, propagate_state(first));
    EXPECT_NEAR(split.eta, whole.eta, 1e-12 * whole.eta);
    EXPECT_NEAR(split.n_sys, whole.n_sys, 1e-12 * (1 + whole.n_sys));
  }
}

TEST(NoiseCascade, PresetConstants) {
  EXPECT_EQ(chain_presets::converter_fpja_transmission, 0.82);
  EXPECT_EQ(chain_presets::directional_fpja_transmission, 0.59);
  EXPECT_EQ(chain_presets::jpa_transmission, 0.56);
  EXPECT_EQ(chain_presets::hemt_added_quanta, 36.0);
  EXPECT_EQ(chain_presets::directional_jpa_gain_db, 18.2);
  const auto d = chain_presets::directional();
  ASSERT_EQ(d.stages.size(), 6u);
  EXPECT_NEAR(d.stages[0].value * d.stages[2].value, 0.59, 1e-15);
  EXPECT_TRUE(d.stages[1].variable);
}

TEST(NoiseCascade, LongDoubleChain) {
  const auto chain = chain_presets::converter<long double>();
  const auto r = efficiency_vs_gain<long double>(chain, {40.0L});
  EXPECT_NEAR(static_cast<double>(r.front().eta), 0.455917394757744241, 1e-14);
}
