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

#ifndef READOUT_NOISE_CASCADE_HPP
#define READOUT_NOISE_CASCADE_HPP

// Quadrature-variance bookkeeping for a cascade of losses, amplifiers and
// added-noise stages. Variances are in quanta with vacuum at 1/4; one added
// quantum raises the variance by 1/2.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "readout/errors.hpp"
#include "readout/units.hpp"

namespace readout {

enum class StageKind { loss, phase_sensitive_gain, phase_preserving_gain, added_noise };

template <typename Real = double>
struct ChainStage {
  StageKind kind{StageKind::loss};
  // Power transmission for loss, quadrature power gain for gain stages,
  // input-referred quanta for added_noise.
  Real value{1};
  // Marks the stage whose gain efficiency_vs_gain sweeps.
  bool variable{false};

  static ChainStage loss(Real transmission) { return {StageKind::loss, transmission, false}; }
  static ChainStage phase_sensitive(Real gain) { return {StageKind::phase_sensitive_gain, gain, false}; }
  static ChainStage phase_preserving(Real gain) { return {StageKind::phase_preserving_gain, gain, false}; }
  static ChainStage added_noise(Real quanta) { return {StageKind::added_noise, quanta, false}; }
  static ChainStage variable_gain(StageKind kind) { return {kind, Real{1}, true}; }

  void validate() const {
    switch (kind) {
      case StageKind::loss:
        if (!(value > 0 && value <= 1)) throw DomainError("loss transmission must lie in (0, 1]");
        break;
      case StageKind::phase_sensitive_gain:
      case StageKind::phase_preserving_gain:
        if (!(value >= 1)) throw DomainError("gain must be >= 1");
        break;
      case StageKind::added_noise:
        if (!(value >= 0)) throw DomainError("added noise must be >= 0 quanta");
        break;
    }
  }
};

template <typename Real = double>
struct NoiseChain {
  std::vector<ChainStage<Real>> stages;

  void validate() const {
    if (stages.empty()) throw DomainError("noise chain must have at least one stage");
    for (const auto& s : stages) s.validate();
  }
};

template <typename Real = double>
struct ChainState {
  Real signal_gain{1};
  Real variance{Real{1} / 4};
  static ChainState vacuum() { return {}; }
};

template <typename Real = double>
struct ChainResult {
  Real signal_gain{};
  Real noise_variance{};
  Real n_sys{};
  Real eta{};
};

template <typename Real>
ChainState<Real> apply_stage(ChainState<Real> s, const ChainStage<Real>& stage) {
  constexpr Real v0 = Real{1} / 4;
  switch (stage.kind) {
    case StageKind::loss:
      s.signal_gain *= stage.value;
      s.variance = stage.value * s.variance + (1 - stage.value) * v0;
      break;
    case StageKind::phase_sensitive_gain:
      s.signal_gain *= stage.value;
      s.variance *= stage.value;
      break;
    case StageKind::phase_preserving_gain:
      s.signal_gain *= stage.value;
      s.variance = stage.value * s.variance + (stage.value - 1) * v0;
      break;
    case StageKind::added_noise:
      s.variance += stage.value * 2 * v0;
      break;
  }
  return s;
}

template <typename Real>
ChainState<Real> propagate_state(const NoiseChain<Real>& chain,
                                 ChainState<Real> state = ChainState<Real>::vacuum()) {
  chain.validate();
  for (const auto& stage : chain.stages) state = apply_stage(state, stage);
  return state;
}

/// Input-referred noise and efficiency eta = 1 / (1 + 2 n_sys) of a state.
template <typename Real>
ChainResult<Real> summarize(const ChainState<Real>& s) {
  constexpr Real v0 = Real{1} / 4;
  ChainResult<Real> r;
  r.signal_gain = s.signal_gain;
  r.noise_variance = s.variance;
  r.n_sys = (s.variance / s.signal_gain - v0) / (2 * v0);
  r.eta = 1 / (1 + 2 * r.n_sys);
  return r;
}

template <typename Real>
ChainResult<Real> propagate(const NoiseChain<Real>& chain,
                            ChainState<Real> seed = ChainState<Real>::vacuum()) {
  return summarize(propagate_state(chain, seed));
}

template <typename Real = double>
struct GainEfficiency {
  Real gain_db{};
  Real eta{};
};

/// Sweeps the single variable gain stage of `chain` over `gains_db`.
template <typename Real>
std::vector<GainEfficiency<Real>> efficiency_vs_gain(const NoiseChain<Real>& chain,
                                                     const std::vector<Real>& gains_db) {
  std::size_t variable_index = chain.stages.size();
  std::size_t n_variable = 0;
  for (std::size_t i = 0; i < chain.stages.size(); ++i) {
    if (chain.stages[i].variable) {
      variable_index = i;
      ++n_variable;
    }
  }
  if (n_variable != 1)
    throw ConfigError("efficiency_vs_gain needs exactly one variable stage, found " +
                      std::to_string(n_variable));
  const StageKind kind = chain.stages[variable_index].kind;
  if (kind != StageKind::phase_sensitive_gain && kind != StageKind::phase_preserving_gain)
    throw ConfigError("the variable stage must be a gain stage");

  std::vector<GainEfficiency<Real>> out;
  out.reserve(gains_db.size());
  NoiseChain<Real> work = chain;
  for (Real db : gains_db) {
    work.stages[variable_index].value = static_cast<Real>(units::db_to_power(db));
    out.push_back({db, propagate(work).eta});
  }
  return out;
}

/// Reported cascade parameters for the two FPJA operating modes.
namespace chain_presets {

// Loss before the JPA split across the two FPJA passes, frequency-converter mode.
inline constexpr double converter_fpja_transmission = 0.82;
// Same path in directional-amplifier mode: residual loss of the amplification mode.
inline constexpr double directional_fpja_transmission = 0.59;
// Loss between the FPJA and the JPA.
inline constexpr double jpa_transmission = 0.56;
// Added noise of everything after the JPA (HEMT and room-temperature chain).
inline constexpr double hemt_added_quanta = 36.0;
// Fixed JPA gain used with the directional amplifier.
inline constexpr double directional_jpa_gain_db = 18.2;

/// FPJA as a converter (unit gain), variable phase-sensitive JPA gain.
template <typename Real = double>
NoiseChain<Real> converter(Real fpja_transmission = Real(converter_fpja_transmission),
                           Real jpa_loss = Real(jpa_transmission),
                           Real hemt_quanta = Real(hemt_added_quanta)) {
  return {{ChainStage<Real>::loss(fpja_transmission), ChainStage<Real>::loss(jpa_loss),
           ChainStage<Real>::variable_gain(StageKind::phase_sensitive_gain),
           ChainStage<Real>::added_noise(hemt_quanta)}};
}

/// FPJA as a variable-gain directional phase-sensitive amplifier with its
/// loss split equally before and after the gain, then a fixed-gain JPA.
template <typename Real = double>
NoiseChain<Real> directional(Real fpja_transmission = Real(directional_fpja_transmission),
                             Real jpa_loss = Real(jpa_transmission),
                             Real jpa_gain_db = Real(directional_jpa_gain_db),
                             Real hemt_quanta = Real(hemt_added_quanta)) {
  const Real half = std::sqrt(fpja_transmission);
  return {{ChainStage<Real>::loss(half),
           ChainStage<Real>::variable_gain(StageKind::phase_sensitive_gain),
           ChainStage<Real>::loss(half), ChainStage<Real>::loss(jpa_loss),
           ChainStage<Real>::phase_sensitive(static_cast<Real>(units::db_to_power(jpa_gain_db))),
           ChainStage<Real>::added_noise(hemt_quanta)}};
}

}  // namespace chain_presets

}  // namespace readout

#endif  // READOUT_NOISE_CASCADE_HPP
