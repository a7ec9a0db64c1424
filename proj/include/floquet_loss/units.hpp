// Copyright 2026 The floquet-loss Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Physical constants (SI, exact 2019 values) and unit conversions.
//
// Internally every energy is carried as an angular frequency E/hbar in rad/s.
// Config files and CSV output use GHz meaning (quantity)/2pi, energies in h*GHz.

#include <cmath>
#include <numbers>

namespace floquet_loss::units {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline constexpr double planck = 6.62607015e-34;              // J s
inline constexpr double hbar = planck / two_pi;                // J s
inline constexpr double elementary_charge = 1.602176634e-19;   // C
inline constexpr double boltzmann = 1.380649e-23;              // J/K
inline constexpr double klitzing_conductance = elementary_charge * elementary_charge / planck;  // g_K = e^2/h

inline constexpr double ghz_to_angular(double f_ghz) { return two_pi * f_ghz * 1e9; }
inline constexpr double mhz_to_angular(double f_mhz) { return two_pi * f_mhz * 1e6; }
inline constexpr double angular_to_ghz(double w) { return w / (two_pi * 1e9); }
inline constexpr double angular_to_mhz(double w) { return w / (two_pi * 1e6); }

inline constexpr double microelectronvolt_to_angular(double e_uev) {
  return e_uev * 1e-6 * elementary_charge / hbar;
}
inline constexpr double angular_to_joule(double w) { return hbar * w; }

inline double dbm_to_watt(double p_dbm) { return 1e-3 * std::pow(10.0, p_dbm / 10.0); }

}  // namespace floquet_loss::units
