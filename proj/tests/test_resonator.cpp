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

#include <doctest.h>

#include <cmath>
#include <random>

using namespace floquet_loss;
namespace u = floquet_loss::units;

namespace {

const double kG = u::mhz_to_angular(231.0);
const double kWd = u::ghz_to_angular(4.284);
const double kKex = u::mhz_to_angular(15.586);
const double kDelta = u::microelectronvolt_to_angular(180.0);

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST_CASE("drive amplitude from photon number") {
  CHECK(omega_q_from_photons(kG, 0.0) == 0.0);
  CHECK(u::angular_to_ghz(omega_q_from_photons(kG, 11.0)) == doctest::Approx(1.532).epsilon(1e-3).scale(0.0));
  CHECK(omega_q_from_photons(kG, 44.0) == 2.0 * omega_q_from_photons(kG, 11.0));
  CHECK_THROWS(omega_q_from_photons(kG, -1.0));
  CHECK_THROWS(photons_from_omega_q(0.0, 1.0));
}

TEST_CASE("photon number from probe power") {
  const double kappa = u::mhz_to_angular(20.0);
  const double p = 1e-15;
  CHECK(photons_from_power(2 * p, kWd, kKex, kappa) == 2 * photons_from_power(p, kWd, kKex, kappa));
  CHECK(photons_from_power(p, kWd, kKex, kKex) == doctest::Approx(2 * p / (u::hbar * kWd * kKex)).epsilon(1e-15).scale(0.0));
  CHECK_THROWS(photons_from_power(0.0, kWd, kKex, kappa));
  CHECK_THROWS(photons_from_power(p, kWd, kKex, -kappa));
}

TEST_CASE("kappa from the transmission dip") {
  CHECK(kappa_from_s21(kKex, 0.0) == kKex);
  CHECK(u::angular_to_mhz(kappa_from_s21(kKex, 0.5)) == doctest::Approx(31.172).epsilon(1e-12).scale(0.0));
  CHECK_THROWS(kappa_from_s21(kKex, 1.0));
  CHECK_THROWS(kappa_from_s21(kKex, 1.2));
  CHECK_THROWS(kappa_from_s21(kKex, -0.1));
  CHECK_THROWS(kappa_from_s21(kKex, 1.0 - 1e-9));
  CHECK_NOTHROW(kappa_from_s21(kKex, 1.0 - 1e-9, 1e10));
  CHECK(kappa_from_s21(kKex, 0.999) > kappa_from_s21(kKex, 0.99));
  CHECK_THROWS(s21_from_kappa(kKex, 0.5 * kKex));
}

TEST_CASE("round trips are exact to 1e-12") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double n_r = std::pow(10.0, 5 * uni(rng) - 1);
    const double s21 = 0.95 * uni(rng);
    const double g = u::mhz_to_angular(50 + 200 * uni(rng));
    CHECK(close(photons_from_omega_q(g, omega_q_from_photons(g, n_r)), n_r, 1e-12));
    const double kappa = kappa_from_s21(kKex, s21);
    CHECK(std::abs(s21_from_kappa(kKex, kappa) - s21) < 1e-12);
    const double p = power_from_photons(n_r, kWd, kKex, kappa);
    CHECK(close(photons_from_power(p, kWd, kKex, kappa), n_r, 1e-12));
    // Synthetic measurement: power and dip back to the drive amplitude.
    const double omega_q = omega_q_from_photons(g, photons_from_power(p, kWd, kKex, kappa_from_s21(kKex, s21)));
    CHECK(close(omega_q, omega_q_from_photons(g, n_r), 1e-12));
  }
}

TEST_CASE("predicted kappa") {
  const double kappa_o = u::mhz_to_angular(16.82);
  CHECK(predicted_kappa(0.0, 20.0, kWd, kappa_o) == kappa_o);
  const double n_r = 123.0;
  const double loss = u::hbar * kWd * n_r * u::mhz_to_angular(1.0);
  CHECK(predicted_kappa(loss, n_r, kWd, kappa_o) - kappa_o == doctest::Approx(u::mhz_to_angular(1.0)).epsilon(1e-12).scale(0.0));
  const double r = noise_power(kWd, u::mhz_to_angular(20.0), 0.3);
  CHECK(r == doctest::Approx(u::hbar * kWd * u::mhz_to_angular(20.0) * 0.3).epsilon(1e-15).scale(0.0));
  CHECK(predicted_kappa(loss, n_r, kWd, kappa_o, r) > predicted_kappa(loss, n_r, kWd, kappa_o));
  double prev = 0.0;
  for (double t = 0.0; t < 1e-12; t += 1e-14) {
    const double k = predicted_kappa(t, n_r, kWd, kappa_o);
    CHECK(k >= prev);
    prev = k;
  }
  LossReport report;
  report.loss_total = loss;
  CHECK(predicted_kappa(report, n_r, kWd, kappa_o) == predicted_kappa(loss, n_r, kWd, kappa_o));
  CHECK_THROWS(predicted_kappa(loss, 0.0, kWd, kappa_o));
  CHECK_THROWS(noise_power(kWd, 1.0, -1.0));
}

TEST_CASE("junction voltage") {
  const JunctionVoltage zero = vjj_amplitude(0.0, kDelta);
  CHECK(zero.volts == 0.0);
  CHECK(zero.ok);
  // hbar Omega / 2e = 360 uV at Omega/2pi ~ 174 GHz.
  const double flip = 2.0 * 2.0 * kDelta;
  CHECK(u::angular_to_ghz(flip) == doctest::Approx(174.1).epsilon(1e-3).scale(0.0));
  CHECK(vjj_amplitude(flip * (1 - 1e-9), kDelta).ok);
  CHECK_FALSE(vjj_amplitude(flip * (1 + 1e-9), kDelta).ok);
  CHECK(vjj_amplitude(flip, kDelta).volts == doctest::Approx(360e-6).epsilon(1e-12).scale(0.0));
  bool seen_bad = false;
  for (double f = 0.0; f < 400.0; f += 0.5) {
    const bool ok = vjj_amplitude(u::ghz_to_angular(f), kDelta).ok;
    if (seen_bad) CHECK_FALSE(ok);
    seen_bad = seen_bad || !ok;
  }
  // One photon: same order as the 479 nV electromagnetic estimate.
  const double one = vjj_amplitude(omega_q_from_photons(kG, 1.0), kDelta).volts;
  CHECK(one > 479e-9 / 3.0);
  CHECK(one < 479e-9 * 3.0);
}

TEST_CASE("resonator parameter validation") {
  CHECK_NOTHROW(ResonatorParams{kWd, kG, kKex, kKex}.validate());
  CHECK_THROWS(ResonatorParams{kWd, kG, 0.0, kKex}.validate());
  CHECK_THROWS(ResonatorParams{kWd, -kG, kKex, kKex}.validate());
}
