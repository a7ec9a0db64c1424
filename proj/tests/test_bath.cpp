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

#include "floquet_loss/bath.hpp"
#include "floquet_loss/units.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <thread>
#include <vector>

using namespace floquet_loss;
namespace u = floquet_loss::units;

namespace {

const double kDelta = u::microelectronvolt_to_angular(180.0);

using testing::pair_breaking_oracle;

QpgBath q1_qpg() { return {u::ghz_to_angular(14.24), kDelta, u::ghz_to_angular(17.0)}; }

}  // namespace

TEST_CASE("pair-breaking integrals vanish at and below threshold") {
  for (double w : {-3.0, 0.0, 1.5, 1.999, 2.0}) {
    CHECK(s_plus_reduced(w) == 0.0);
    CHECK(s_minus_reduced(w) == 0.0);
  }
  CHECK(s_plus(1.5 * kDelta, kDelta) == 0.0);
  CHECK(s_minus(1.5 * kDelta, kDelta) == 0.0);
}

TEST_CASE("reduced integrals match the two-dimensional region integral") {
  for (double w : {2.1, 3.0, 4.0, 10.0}) {
    CAPTURE(w);
    CHECK(s_plus_reduced(w) == doctest::Approx(pair_breaking_oracle(w, true)).epsilon(1e-3).scale(0.0));
    CHECK(s_minus_reduced(w) == doctest::Approx(pair_breaking_oracle(w, false)).epsilon(1e-3).scale(0.0));
  }
}

TEST_CASE("threshold behaviour") {
  for (double w : {2.01, 2.1, 2.25, 2.5}) {
    CAPTURE(w);
    CHECK(s_plus_reduced(w) == doctest::Approx(u::pi * (1.0 + (w - 2.0) / 4.0)).epsilon(0.05).scale(0.0));
  }
  for (double w : {2.01, 2.1, 2.25, 2.4}) {
    CAPTURE(w);
    CHECK(s_minus_reduced(w) == doctest::Approx(u::pi / 2.0 * (w - 2.0)).epsilon(0.05).scale(0.0));
  }
}

TEST_CASE("threshold form with +2 offset" * doctest::should_fail()) {
  CHECK(s_plus_reduced(2.1) == doctest::Approx(u::pi * (1.0 + (2.1 + 2.0) / 4.0)).epsilon(0.05).scale(0.0));
}

TEST_CASE("linear minus-branch form up to w = 2.5" * doctest::should_fail()) {
  for (int i = 0; i <= 49; ++i) {
    const double w = 2.01 + 0.01 * i;
    REQUIRE(s_minus_reduced(w) == doctest::Approx(u::pi / 2.0 * (w - 2.0)).epsilon(0.05).scale(0.0));
  }
}

TEST_CASE("large-argument asymptote") {
  CHECK(std::abs(s_plus_reduced(40.0) / 40.0 - 1.0) < 0.1);
  CHECK(std::abs(s_minus_reduced(40.0) / 40.0 - 1.0) < 0.1);
  CHECK(s_plus(40.0 * kDelta, kDelta) == s_plus_reduced(40.0));
}

TEST_CASE("monotone branches with minus below plus") {
  double prev_p = 0.0, prev_m = 0.0;
  for (int i = 1; i <= 1000; ++i) {
    const double w = 2.0 + 38.0 * i / 1000.0;
    const double sp = s_plus_reduced(w), sm = s_minus_reduced(w);
    CAPTURE(w);
    CHECK(sm < sp);
    if (w > 2.001) {
      CHECK(sp > prev_p);
      CHECK(sm > prev_m);
    }
    prev_p = sp;
    prev_m = sm;
  }
}

TEST_CASE("radiative spectrum") {
  const RadiativeBath rad{3830.0};
  CHECK(j_rad(0.0, rad) == 0.0);
  CHECK(j_rad(-1e10, rad) == 0.0);
  CHECK(j_rad(u::ghz_to_angular(3.83), rad) == doctest::Approx(u::mhz_to_angular(1.0)).epsilon(1e-14).scale(0.0));
  const double w = u::ghz_to_angular(7.3);
  CHECK(j_rad(2 * w, rad) == 2 * j_rad(w, rad));
  CHECK_THROWS(RadiativeBath{0.0}.validate());
}

TEST_CASE("dielectric spectrum") {
  const double e_c = u::ghz_to_angular(0.259);
  const double wc = u::ghz_to_angular(1000.0);
  const DielectricBath diel{4.8e5, wc, e_c};
  CHECK(j_diel(0.0, diel) == 0.0);
  CHECK(j_diel(-wc, diel) == 0.0);
  const double uncut = wc * wc / (4.0 * e_c * 4.8e5);
  CHECK(j_diel(wc, diel) == doctest::Approx(uncut * std::exp(-1.0)).epsilon(1e-14).scale(0.0));
  // 10 GHz by hand: (2 pi 1e10)^2 / (4 * 2 pi 2.59e8 * 4.8e5) * exp(-0.01)
  const double w = u::ghz_to_angular(10.0);
  const double hand = u::two_pi * 1e20 / (4.0 * 2.59e8 * 4.8e5) * std::exp(-0.01);
  CHECK(j_diel(w, diel) == doctest::Approx(hand).epsilon(1e-13).scale(0.0));
  CHECK(j_diel(w, diel) > 0.0);
  CHECK_THROWS(DielectricBath{4.8e5, 0.0, e_c}.validate());
}

TEST_CASE("QPG spectrum") {
  const QpgBath bath = q1_qpg();
  CHECK(j_qpg(1.9 * kDelta, bath, QpgBranch::Plus) == 0.0);
  CHECK(j_qpg(1.9 * kDelta, bath, QpgBranch::Minus) == 0.0);
  CHECK(j_qpg(-5 * kDelta, bath, QpgBranch::Plus) == 0.0);

  const double w = 2.1 * kDelta;
  const double cut = 1.0 + std::pow(w / bath.omega_c, 2);
  CHECK(j_qpg(w, bath, QpgBranch::Plus) ==
        doctest::Approx(16.0 * 14.24e9 * s_plus_reduced(2.1) / cut).epsilon(1e-12).scale(0.0));
  CHECK(j_qpg(w, bath, QpgBranch::Minus) ==
        doctest::Approx(16.0 * 14.24e9 * s_minus_reduced(2.1) / cut).epsilon(1e-12).scale(0.0));

  QpgBath high = bath;
  high.omega_c = 5.0 * kDelta;
  QpgBath ideal = bath;
  ideal.omega_c = 1e30;
  CHECK(j_qpg(high.omega_c, ideal, QpgBranch::Plus) / j_qpg(high.omega_c, high, QpgBranch::Plus) ==
        doctest::Approx(2.0).epsilon(1e-12).scale(0.0));

  const auto [jp, jm] = j_qpg_pair(3.3 * kDelta, bath);
  CHECK(jp == j_qpg(3.3 * kDelta, bath, QpgBranch::Plus));
  CHECK(jm == j_qpg(3.3 * kDelta, bath, QpgBranch::Minus));
  CHECK_THROWS(QpgBath{bath.e_j, 0.0, bath.omega_c}.validate());
  CHECK_THROWS(QpgBath{bath.e_j, kDelta, -1.0}.validate());
}

TEST_CASE("spectra are nonnegative everywhere") {
  const RadiativeBath rad{3830.0};
  const DielectricBath diel{4.8e5, u::ghz_to_angular(1000.0), u::ghz_to_angular(0.259)};
  const QpgBath qpg = q1_qpg();
  for (double f = -200.0; f <= 1000.0; f += 3.7) {
    const double w = u::ghz_to_angular(f);
    CHECK(j_rad(w, rad) >= 0.0);
    CHECK(j_diel(w, diel) >= 0.0);
    const auto [jp, jm] = j_qpg_pair(w, qpg);
    CHECK(jp >= 0.0);
    CHECK(jm >= 0.0);
    if (w < 2.0 * kDelta) CHECK(jp + jm == 0.0);
  }
}

TEST_CASE("conductance") {
  const QpgBath bath = q1_qpg();
  CHECK_THROWS(qpg_conductance(0.0, bath));
  CHECK_THROWS(qpg_conductance(-1.0, bath));
  CHECK(qpg_conductance(1.5 * kDelta, bath) == 0.0);
  const double w = 4.0 * kDelta;
  const double sigma = qpg_conductance(w, bath);
  CHECK(std::isfinite(sigma));
  CHECK(sigma > 0.0);
  CHECK(sigma == doctest::Approx(u::pi * u::klitzing_conductance * j_qpg(w, bath, QpgBranch::Plus) / w).epsilon(1e-14).scale(0.0));
  QpgBath ideal = bath;
  ideal.omega_c = 1e30;
  for (double r : {2.2, 3.0, 7.0, 20.0}) {
    const double x = r * kDelta;
    CHECK(qpg_conductance(x, bath) / qpg_conductance(x, ideal) ==
          doctest::Approx(1.0 / (1.0 + std::pow(x / bath.omega_c, 2))).epsilon(1e-12).scale(0.0));
  }
}

TEST_CASE("thermal quasiparticle density") {
  const double x200 = x_qp_thermal(0.2, kDelta);
  CHECK(x200 > 1e-6);
  CHECK(x200 < 1e-4);
  CHECK(x_qp_thermal(1e-3, kDelta) == 0.0);
  CHECK_THROWS(x_qp_thermal(0.0, kDelta));
}

TEST_CASE("thermal density at 300 mK is of order 3e-5" * doctest::should_fail()) {
  const double x300 = x_qp_thermal(0.3, kDelta);
  CHECK(x300 > 3e-6);
  CHECK(x300 < 3e-4);
}

TEST_CASE("pair-breaking cache returns identical values under concurrent use") {
  const QpgBath bath = q1_qpg();
  PairBreakingCache cache(bath.delta_al);
  std::vector<double> omegas;
  for (int i = 0; i < 200; ++i) omegas.push_back(kDelta * (1.5 + 0.1 * (i % 50)));
  std::vector<std::thread> pool;
  std::vector<int> mismatches(4, 0);
  for (int t = 0; t < 4; ++t)
    pool.emplace_back([&, t] {
      for (double w : omegas) {
        const auto a = j_qpg_pair(w, bath, cache);
        const auto b = j_qpg_pair(w, bath);
        if (a != b) ++mismatches[t];
      }
    });
  for (auto& th : pool) th.join();
  for (int m : mismatches) CHECK(m == 0);
  CHECK(cache.size() <= 50);
  CHECK(cache.delta_al() == bath.delta_al);
}
