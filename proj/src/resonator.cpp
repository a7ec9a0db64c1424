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

#include "floquet_loss/resonator.hpp"

#include "floquet_loss/units.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace floquet_loss {

void ResonatorParams::validate() const {
  if (!(omega_r > 0.0)) throw std::invalid_argument("resonator omega_r must be positive");
  if (!(g > 0.0)) throw std::invalid_argument("coupling g must be positive");
  if (!(kappa_ex > 0.0)) throw std::invalid_argument("kappa_ex must be positive");
  if (!(kappa_o > 0.0)) throw std::invalid_argument("kappa_o must be positive");
}

double omega_q_from_photons(double g, double n_r) {
  if (!(n_r >= 0.0)) throw std::invalid_argument("photon number must be nonnegative");
  return 2.0 * g * std::sqrt(n_r);
}

double photons_from_omega_q(double g, double omega_q) {
  if (!(g > 0.0)) throw std::invalid_argument("coupling g must be positive");
  if (!(omega_q >= 0.0)) throw std::invalid_argument("drive amplitude must be nonnegative");
  const double r = omega_q / (2.0 * g);
  return r * r;
}

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be positive");
}

}  // namespace

double photons_from_power(double p_r, double omega_d, double kappa_ex, double kappa) {
  require_positive(p_r, "probe power");
  require_positive(omega_d, "omega_d");
  require_positive(kappa_ex, "kappa_ex");
  require_positive(kappa, "kappa");
  return 2.0 * p_r * kappa_ex / (units::hbar * omega_d * kappa * kappa);
}

double power_from_photons(double n_r, double omega_d, double kappa_ex, double kappa) {
  require_positive(n_r, "photon number");
  require_positive(omega_d, "omega_d");
  require_positive(kappa_ex, "kappa_ex");
  require_positive(kappa, "kappa");
  return n_r * units::hbar * omega_d * kappa * kappa / (2.0 * kappa_ex);
}

double kappa_from_s21(double kappa_ex, double s21_min, double max_ratio) {
  require_positive(kappa_ex, "kappa_ex");
  if (!(s21_min >= 0.0)) throw std::invalid_argument("min |S21| must be nonnegative");
  if (!(s21_min < 1.0)) throw std::invalid_argument("min |S21| >= 1: no resonance dip");
  const double kappa = kappa_ex / (1.0 - s21_min);
  if (!(kappa <= max_ratio * kappa_ex)) {
    std::ostringstream msg;
    msg << "min |S21| = " << s21_min << " implies kappa/kappa_ex = " << kappa / kappa_ex << " above the bound "
        << max_ratio;
    throw std::invalid_argument(msg.str());
  }
  return kappa;
}

double s21_from_kappa(double kappa_ex, double kappa) {
  require_positive(kappa_ex, "kappa_ex");
  require_positive(kappa, "kappa");
  if (kappa < kappa_ex) throw std::invalid_argument("kappa below kappa_ex has no |S21| dip");
  return 1.0 - kappa_ex / kappa;
}

double noise_power(double omega_d, double kappa, double noise_photons) {
  if (!(noise_photons >= 0.0)) throw std::invalid_argument("noise photon number must be nonnegative");
  return units::hbar * omega_d * kappa * noise_photons;
}

double predicted_kappa(double loss_watts, double n_r, double omega_d, double kappa_o, std::optional<double> r_power) {
  require_positive(n_r, "photon number");
  require_positive(omega_d, "omega_d");
  return kappa_o + (loss_watts + r_power.value_or(0.0)) / (units::hbar * omega_d * n_r);
}

double predicted_kappa(const LossReport& loss, double n_r, double omega_d, double kappa_o,
                       std::optional<double> r_power) {
  return predicted_kappa(loss.loss_total, n_r, omega_d, kappa_o, r_power);
}

JunctionVoltage vjj_amplitude(double omega_q, double delta_al) {
  if (!(omega_q >= 0.0)) throw std::invalid_argument("drive amplitude must be nonnegative");
  JunctionVoltage v;
  v.volts = units::hbar * omega_q / (2.0 * units::elementary_charge);
  v.ok = v.volts < 2.0 * units::hbar * delta_al / units::elementary_charge;
  return v;
}

}  // namespace floquet_loss
