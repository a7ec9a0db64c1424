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

// Resonator observables <-> semiclassical qubit drive, and the loss-to-linewidth map
//   hbar omega_d N_r (kappa - kappa_o) = T + R.
// The drive relations assume a resonant probe (omega_d = omega_r).

#include "floquet_loss/dissipation.hpp"

#include <optional>

namespace floquet_loss {

struct ResonatorParams {
  double omega_r = 0.0;   // rad/s
  double g = 0.0;         // rad/s
  double kappa_ex = 0.0;  // rad/s
  double kappa_o = 0.0;   // rad/s
  void validate() const;
};

/// Omega_q = 2 g sqrt(N_r).
double omega_q_from_photons(double g, double n_r);
double photons_from_omega_q(double g, double omega_q);

/// N_r = 2 P_r kappa_ex / (hbar omega_d kappa^2), P_r in watts.
double photons_from_power(double p_r, double omega_d, double kappa_ex, double kappa);
double power_from_photons(double n_r, double omega_d, double kappa_ex, double kappa);

/// kappa = kappa_ex / (1 - s21_min). Dips with kappa > max_ratio * kappa_ex are rejected.
double kappa_from_s21(double kappa_ex, double s21_min, double max_ratio = 1e6);
double s21_from_kappa(double kappa_ex, double kappa);

/// R = hbar omega_d kappa <da^dag da>, in watts.
double noise_power(double omega_d, double kappa, double noise_photons);

/// kappa_o + (T + R) / (hbar omega_d N_r); powers in watts.
double predicted_kappa(double loss_watts, double n_r, double omega_d, double kappa_o,
                       std::optional<double> r_power = std::nullopt);
double predicted_kappa(const LossReport& loss, double n_r, double omega_d, double kappa_o,
                       std::optional<double> r_power = std::nullopt);

struct JunctionVoltage {
  double volts = 0.0;
  bool ok = true;  // below the pair-breaking bias 2 Delta / e
};

/// Semiclassical ac bias hbar Omega_q / (2e) across the junction.
JunctionVoltage vjj_amplitude(double omega_q, double delta_al);

struct ComparisonPoint {
  std::optional<double> p_r;          // W
  double n_r = 0.0;
  double omega_q_drive = 0.0;         // rad/s
  std::optional<double> kappa_meas;   // rad/s
  std::optional<double> noise_photons;
  double kappa_pred = 0.0;            // rad/s
};

}  // namespace floquet_loss
