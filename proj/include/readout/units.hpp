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

#ifndef READOUT_UNITS_HPP
#define READOUT_UNITS_HPP

#include <cmath>
#include <numbers>

// The core works in angular frequency (rad/s) and seconds. Laboratory units
// (MHz as nu = omega / 2pi, us, dB) are converted only at the config boundary
// and in tests.
namespace readout::units {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

constexpr double mhz(double nu_mhz) { return two_pi * nu_mhz * 1e6; }
constexpr double ghz(double nu_ghz) { return two_pi * nu_ghz * 1e9; }
constexpr double to_mhz(double omega) { return omega / (two_pi * 1e6); }
constexpr double to_ghz(double omega) { return omega / (two_pi * 1e9); }

constexpr double us(double t_us) { return t_us * 1e-6; }
constexpr double ns(double t_ns) { return t_ns * 1e-9; }
constexpr double to_us(double t) { return t * 1e6; }
constexpr double to_ns(double t) { return t * 1e9; }

inline double db_to_power(double db) { return std::pow(10.0, db / 10.0); }
inline double power_to_db(double ratio) { return 10.0 * std::log10(ratio); }

}  // namespace readout::units

#endif  // READOUT_UNITS_HPP
