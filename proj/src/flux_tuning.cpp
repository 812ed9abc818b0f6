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

#include "readout/flux_tuning.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "readout/errors.hpp"
#include "readout/parallel.hpp"

namespace readout {

double squid_frequency(const FluxTuneParams& p) {
  if (!(p.omega_max > 0)) throw DomainError("omega_max must be positive");
  if (!(p.participation >= 0 && p.participation <= 1)) throw DomainError("participation must lie in [0, 1]");
  if (!(std::abs(p.flux) < 0.5)) throw DomainError("flux outside the first branch |Phi/Phi0| < 1/2 (out of model)");
  const double c = std::sqrt(std::abs(std::cos(std::numbers::pi * p.flux)));
  return p.omega_max * (p.participation * c + (1 - p.participation));
}

double omega_max_for_resonance(double participation, double flux, double target) {
  return target / squid_frequency({1.0, participation, flux});
}

double resonance_flux(const FluxTuneParams& params, double target) {
  FluxTuneParams p = params;
  p.flux = 0;
  if (target > squid_frequency(p)) throw DomainError("target above the zero-flux frequency");
  double lo = 0.0, hi = 0.5;
  for (int it = 0; it < 200; ++it) {
    const double mid = (lo + hi) / 2;
    p.flux = mid;
    (squid_frequency(p) > target ? lo : hi) = mid;
  }
  p.flux = lo;
  if (std::abs(squid_frequency(p) - target) > 1e-9 * target) throw DomainError("target not reached on the first branch");
  return lo;
}

double SpuriousLadder::coupling(int index) const {
  auto it = couplings.find(index);
  return it == couplings.end() ? default_coupling : it->second;
}

void SpuriousLadder::validate() const {
  if (!(fsr > 0)) throw ConfigError("ladder free spectral range must be positive");
  if (!(kappa >= 0) || !(default_coupling >= 0)) throw ConfigError("ladder linewidth and couplings must be >= 0");
  for (const auto& [k, g] : couplings)
    if (!(g >= 0)) throw ConfigError("ladder coupling of element " + std::to_string(k) + " is negative");
}

std::vector<LadderElement> ladder_elements(const SpuriousLadder& ladder, double lo, double hi) {
  ladder.validate();
  if (!(hi >= lo)) throw DomainError("ladder range is empty");
  std::vector<LadderElement> out;
  const int first = static_cast<int>(std::ceil((lo - ladder.anchor) / ladder.fsr));
  for (int k = first;; ++k) {
    const double w = ladder.anchor + k * ladder.fsr;
    if (w < lo) continue;
    if (w > hi) break;
    out.push_back({k, w});
  }
  return out;
}

std::vector<double> ladder_frequencies(const SpuriousLadder& ladder, double lo, double hi) {
  std::vector<double> out;
  for (const auto& e : ladder_elements(ladder, lo, hi)) out.push_back(e.omega);
  return out;
}

HybridSpectrum hybridized_spectrum(std::span<const ModeSpec> bare, const Eigen::MatrixXd& couplings) {
  const auto n = static_cast<Eigen::Index>(bare.size());
  if (couplings.rows() != n || couplings.cols() != n)
    throw ConfigError("coupling matrix dimension does not match the number of modes");
  if (n > 0 && (couplings - couplings.transpose()).cwiseAbs().maxCoeff() >
                   1e-12 * (1 + couplings.cwiseAbs().maxCoeff()))
    throw ConfigError("coupling matrix must be symmetric");

  Eigen::MatrixXcd h = couplings.cast<std::complex<double>>();
  for (Eigen::Index j = 0; j < n; ++j)
    h(j, j) += std::complex<double>(bare[static_cast<std::size_t>(j)].omega, -bare[static_cast<std::size_t>(j)].kappa() / 2);

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(h);
  const auto& values = solver.eigenvalues();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto l, auto r) { return values[l].real() < values[r].real(); });

  HybridSpectrum out;
  out.eigenfrequencies.resize(n);
  out.eigenlinewidths.resize(n);
  out.participations.resize(n, n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.eigenfrequencies[k] = values[src].real();
    out.eigenlinewidths[k] = -2 * values[src].imag();
    const Eigen::VectorXcd v = solver.eigenvectors().col(src).normalized();
    out.eigenvectors.col(k) = v;
    const Eigen::VectorXd w = v.cwiseAbs2();
    out.participations.row(k) = (w / w.sum()).transpose();
  }
  return out;
}

namespace {

HybridSpectrum permute(const HybridSpectrum& s, const std::vector<Eigen::Index>& perm) {
  HybridSpectrum out = s;
  for (std::size_t k = 0; k < perm.size(); ++k) {
    const auto dst = static_cast<Eigen::Index>(k);
    out.eigenfrequencies[dst] = s.eigenfrequencies[perm[k]];
    out.eigenlinewidths[dst] = s.eigenlinewidths[perm[k]];
    out.participations.row(dst) = s.participations.row(perm[k]);
    out.eigenvectors.col(dst) = s.eigenvectors.col(perm[k]);
  }
  return out;
}

// perm[k] = index in `next` that continues branch k of `prev`, greedily by overlap.
std::vector<Eigen::Index> match_branches(const HybridSpectrum& prev, const HybridSpectrum& next) {
  const Eigen::Index n = prev.eigenvectors.cols();
  const Eigen::MatrixXd overlap = (prev.eigenvectors.adjoint() * next.eigenvectors).cwiseAbs();
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n), -1);
  std::vector<bool> row_used(static_cast<std::size_t>(n), false), col_used(static_cast<std::size_t>(n), false);
  for (Eigen::Index step = 0; step < n; ++step) {
    double best = -1;
    Eigen::Index bi = 0, bj = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (row_used[static_cast<std::size_t>(i)]) continue;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (col_used[static_cast<std::size_t>(j)]) continue;
        if (overlap(i, j) > best) {
          best = overlap(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    row_used[static_cast<std::size_t>(bi)] = true;
    col_used[static_cast<std::size_t>(bj)] = true;
    perm[static_cast<std::size_t>(bi)] = bj;
  }
  return perm;
}

}  // namespace

FluxSweep flux_sweep(const SpectroscopyModel& model, std::span<const double> fluxes) {
  if (fluxes.empty()) throw DomainError("flux grid must not be empty");
  if (model.tunable.empty() && model.fixed.empty()) throw ConfigError("spectroscopy model has no modes");

  auto tunable_omega = [&](const TunableMode& t, double flux) {
    return squid_frequency({t.omega_max, t.participation, flux});
  };

  // One ladder window for the whole sweep keeps the mode count fixed.
  std::vector<LadderElement> ladder;
  if (model.ladder) {
    double lo = INFINITY, hi = -INFINITY;
    for (double f : fluxes)
      for (const auto& t : model.tunable) {
        lo = std::min(lo, tunable_omega(t, f));
        hi = std::max(hi, tunable_omega(t, f));
      }
    for (const auto& m : model.fixed) {
      lo = std::min(lo, m.omega);
      hi = std::max(hi, m.omega);
    }
    ladder = ladder_elements(*model.ladder, lo - model.ladder->fsr, hi + model.ladder->fsr);
  }

  FluxSweep out;
  out.fluxes.assign(fluxes.begin(), fluxes.end());
  for (const auto& t : model.tunable) out.bare_labels.push_back(t.label);
  for (const auto& m : model.fixed) out.bare_labels.push_back(m.label);
  for (const auto& e : ladder) out.bare_labels.push_back("ladder[" + std::to_string(e.index) + "]");
  const std::size_t n_core = model.tunable.size() + model.fixed.size();
  const auto n = static_cast<Eigen::Index>(out.bare_labels.size());

  auto index_of = [&](const std::string& label) -> Eigen::Index {
    for (std::size_t i = 0; i < n_core; ++i)
      if (out.bare_labels[i] == label) return static_cast<Eigen::Index>(i);
    throw ConfigError("unknown spectroscopy mode '" + label + "'");
  };
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [pair, value] : model.couplings) {
    const auto i = index_of(pair.first), j = index_of(pair.second);
    if (i == j) throw ConfigError("a mode cannot couple to itself");
    g(i, j) = g(j, i) = value;
  }
  for (std::size_t e = 0; e < ladder.size(); ++e) {
    const auto row = static_cast<Eigen::Index>(n_core + e);
    const double ge = model.ladder->coupling(ladder[e].index);
    for (std::size_t i = 0; i < n_core; ++i) g(row, static_cast<Eigen::Index>(i)) = g(static_cast<Eigen::Index>(i), row) = ge;
  }

  out.spectra.resize(fluxes.size());
  parallel_for(fluxes.size(), [&](std::size_t f) {
    std::vector<ModeSpec> bare;
    for (const auto& t : model.tunable)
      bare.push_back({t.label, tunable_omega(t, fluxes[f]), t.kappa_ext, t.kappa_int});
    for (const auto& m : model.fixed) bare.push_back(m);
    for (const auto& e : ladder) bare.push_back({"ladder", e.omega, 0.0, model.ladder->kappa});
    out.spectra[f] = hybridized_spectrum(bare, g);
  });
  for (std::size_t f = 1; f < out.spectra.size(); ++f)
    out.spectra[f] = permute(out.spectra[f], match_branches(out.spectra[f - 1], out.spectra[f]));
  return out;
}

}  // namespace readout
