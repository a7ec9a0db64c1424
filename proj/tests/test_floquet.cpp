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

#include "floquet_loss/floquet.hpp"
#include "floquet_loss/units.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace floquet_loss;
namespace u = floquet_loss::units;

namespace {

TransmonParams q1(int dim, double n_g = 0.25) {
  return {u::ghz_to_angular(0.259), u::ghz_to_angular(14.24), n_g, dim};
}

const double kWd = u::ghz_to_angular(4.284);

NumericalConfig small(int dim, int n_t = 101, int n_big_t = 2001) { return {dim, (n_t - 1) / 2, n_t, n_big_t}; }

// Classical RK4 on i dU/dt = H(t) U with a fine fixed step.
Matrix rk4_propagator(const TransmonParams& p, const DriveParams& d, int steps) {
  const double dt = d.period() / steps;
  Matrix u_mat = Matrix::Identity(p.dim, p.dim);
  const Complex mi(0.0, -1.0);
  auto f = [&](double t, const Matrix& x) -> Matrix { return mi * (hamiltonian_at_time(p, d, t) * x); };
  for (int s = 0; s < steps; ++s) {
    const double t = s * dt;
    const Matrix k1 = f(t, u_mat);
    const Matrix k2 = f(t + dt / 2, u_mat + dt / 2 * k1);
    const Matrix k3 = f(t + dt / 2, u_mat + dt / 2 * k2);
    const Matrix k4 = f(t + dt, u_mat + dt * k3);
    u_mat += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return u_mat;
}

}  // namespace

TEST_CASE("numerical config defaults and validation") {
  NumericalConfig cfg;
  CHECK(cfg.dim == 401);
  CHECK(cfg.k_max == 200);
  CHECK(cfg.n_t == 2001);
  CHECK(cfg.n_big_t == 20001);
  CHECK(cfg.propagation_steps() % cfg.n_t == 0);
  CHECK(cfg.propagation_steps() >= cfg.n_big_t - 1);
  CHECK_THROWS(NumericalConfig{5, 1, 2, 100}.validate());
  CHECK_THROWS(NumericalConfig{5, 1, 11, 2}.validate());
  CHECK_THROWS(NumericalConfig{5, 0, 11, 100}.validate());
  CHECK_THROWS(NumericalConfig{4, 1, 11, 100}.validate());
}

TEST_CASE("undriven propagator is the static exponential") {
  const auto p = q1(21);
  const DriveParams d{0.0, kWd};
  const Matrix u_mat = one_period_propagator(p, d, small(21));
  const auto spec = static_spectrum(p);
  const Matrix v = spec.states.cast<Complex>();
  Matrix expect = Matrix::Zero(21, 21);
  for (int i = 0; i < 21; ++i) expect += std::exp(Complex(0.0, -spec.energies[i] * d.period())) * v.col(i) * v.col(i).adjoint();
  CHECK((u_mat - expect).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("propagator agrees with a fine RK4 integration") {
  const auto p = q1(5);
  const DriveParams d{u::ghz_to_angular(1.0), kWd};
  const Matrix u_mat = one_period_propagator(p, d, small(5, 101, 20001));
  const Matrix oracle = rk4_propagator(p, d, 40000);
  CHECK((u_mat - oracle).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("step refinement changes the propagator by less than 1e-8") {
  const auto p = q1(5);
  const DriveParams d{u::ghz_to_angular(1.0), kWd};
  const Matrix coarse = one_period_propagator(p, d, small(5, 101, 20001));
  const Matrix fine = one_period_propagator(p, d, small(5, 101, 200001));
  CHECK((coarse - fine).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("unitarity under strong drive") {
  for (double omega : {5.0, 40.0}) {
    const auto p = q1(41);
    const DriveParams d{u::ghz_to_angular(omega), kWd};
    CHECK(unitarity_defect(one_period_propagator(p, d, small(41))) < 1e-8);
  }
}

TEST_CASE("drive frequency must be positive") {
  CHECK_THROWS(one_period_propagator(q1(5), {1.0, 0.0}, small(5)));
  CHECK_THROWS(one_period_propagator(q1(5), {1.0, -kWd}, small(5)));
}

TEST_CASE("quasienergy folding") {
  const double w = 10.0;
  CHECK(fold_quasienergy(5.0, w) == 5.0);
  CHECK(fold_quasienergy(-5.0, w) == 5.0);
  CHECK(fold_quasienergy(12.0, w) == doctest::Approx(2.0));
  CHECK(fold_quasienergy(-23.0, w) == doctest::Approx(-3.0));
  for (double e = -100.0; e < 100.0; e += 0.37) {
    const double f = fold_quasienergy(e, w);
    CHECK(f > -w / 2);
    CHECK(f <= w / 2);
    CHECK(std::remainder(f - e, w) == doctest::Approx(0.0).scale(1.0));
  }
}

TEST_CASE("zero drive: quasienergies are folded static energies and modes are eigenstates") {
  const auto p = q1(21);
  const DriveParams d{0.0, kWd};
  const auto cfg = small(21);
  const FloquetBasis b = compute_floquet_basis(propagate_period(p, d, cfg), p, d, cfg);
  const auto spec = static_spectrum(p);
  for (int i = 0; i < 21; ++i) {
    const double expect = fold_quasienergy(spec.energies[i], kWd);
    CHECK(std::abs(b.quasienergies[i] - expect) <= 1e-9 * std::max(std::abs(expect), kWd));
    CHECK(b.avg_energy[i] == doctest::Approx(spec.energies[i]).epsilon(1e-9).scale(0.0));
  }
  for (int i = 0; i < 5; ++i) CHECK(std::norm(spec.states.col(i).cast<Complex>().dot(b.modes0.col(i))) > 1 - 1e-9);
}

TEST_CASE("basis invariants under drive") {
  const auto p = q1(41);
  const DriveParams d{u::ghz_to_angular(8.0), kWd};
  const auto cfg = small(41);
  const FloquetBasis b = compute_floquet_basis(propagate_period(p, d, cfg), p, d, cfg);
  CHECK((b.modes0.adjoint() * b.modes0 - Matrix::Identity(41, 41)).cwiseAbs().maxCoeff() < 1e-8);
  for (int i = 0; i < 41; ++i) {
    CHECK(b.quasienergies[i] > -kWd / 2);
    CHECK(b.quasienergies[i] <= kWd / 2);
    if (i > 0) CHECK(b.avg_energy[i] >= b.avg_energy[i - 1]);
  }
  std::vector<int> sorted = b.order;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> iota(41);
  std::iota(iota.begin(), iota.end(), 0);
  CHECK(sorted == iota);

  // Eigenvectors of U with the recorded phases.
  const Matrix u_mat = one_period_propagator(p, d, cfg);
  for (int i = 0; i < 41; ++i) {
    const Vector lhs = u_mat * b.modes0.col(i);
    const Vector rhs = std::exp(Complex(0.0, -b.quasienergies[i] * d.period())) * b.modes0.col(i);
    CHECK((lhs - rhs).norm() < 1e-8);
  }
}

TEST_CASE("both basis routes agree") {
  const auto p = q1(21);
  const DriveParams d{u::ghz_to_angular(3.0), kWd};
  const auto cfg = small(21);
  const FloquetBasis a = compute_floquet_basis(propagate_period(p, d, cfg), p, d, cfg);
  const FloquetBasis b = compute_floquet_basis(one_period_propagator(p, d, cfg), p, d, cfg);
  CHECK((a.avg_energy - b.avg_energy).cwiseAbs().maxCoeff() < 1e-6 * a.avg_energy.cwiseAbs().maxCoeff());
  CHECK((a.quasienergies - b.quasienergies).cwiseAbs().maxCoeff() < 1e-9 * kWd);
}

TEST_CASE("mode table") {
  const auto p = q1(21);
  const auto cfg = small(21);
  SUBCASE("static modes only pick up a global phase") {
    const DriveParams d{0.0, kWd};
    const FloquetBasis b = compute_floquet_basis(propagate_period(p, d, cfg), p, d, cfg);
    const ModeTable t = mode_table(b, p, d, cfg);
    CHECK(t.samples.size() == static_cast<std::size_t>(cfg.n_t));
    for (const auto& s : t.samples)
      for (int i = 0; i < 21; ++i) CHECK(std::abs(b.modes0.col(i).dot(s.col(i))) > 1 - 1e-8);
  }
  SUBCASE("driven table") {
    const DriveParams d{u::ghz_to_angular(6.0), kWd};
    const FloquetBasis b = compute_floquet_basis(propagate_period(p, d, cfg), p, d, cfg);
    const ModeTable t = mode_table(b, p, d, cfg);
    CHECK((t.samples[0] - b.modes0).norm() == 0.0);
    CHECK(t.closure_fidelity > 1 - 1e-6);
    for (std::size_t s = 0; s < t.samples.size(); s += 10) {
      CHECK(t.times[s] == doctest::Approx(s * d.period() / cfg.n_t));
      CHECK((t.samples[s].adjoint() * t.samples[s] - Matrix::Identity(21, 21)).cwiseAbs().maxCoeff() < 1e-6);
    }
    const RealVector avg = averaged_energy(b, t, p, d);
    CHECK((avg - b.avg_energy).cwiseAbs().maxCoeff() < 1e-9 * b.avg_energy.cwiseAbs().maxCoeff());

    const ModeTable sub = mode_table(b, p, d, cfg, {0, 3});
    CHECK(sub.samples[5].cols() == 2);
    CHECK((sub.samples[5].col(1) - t.samples[5].col(3)).norm() < 1e-12);
  }
}

TEST_CASE("overlap matrix: chaotic block at the bottom, diagonal above it") {
  const auto p = q1(61);
  const DriveParams d{u::ghz_to_angular(2.2), kWd};
  const auto cfg = small(61, 101, 4001);
  const FloquetBasis b = compute_floquet_basis(propagate_period(p, d, cfg), p, d, cfg);
  const auto chaos = classify_chaotic(b, static_spectrum(p));
  for (int i = 0; i < 61; ++i) CHECK(chaos.overlaps.row(i).sum() == doctest::Approx(1.0).epsilon(1e-8).scale(0.0));
  CHECK(chaos.n_ch > 0);
  CHECK(chaos.n_ch < 20);
  CHECK(chaos.n_ch == std::count(chaos.labels.begin(), chaos.labels.end(), ModeLabel::Chaotic));
  for (int i = 0; i < 61; ++i) {
    CAPTURE(i);
    if (chaos.labels[i] == ModeLabel::Chaotic) CHECK(i < chaos.n_ch + 2);
    if (i >= chaos.n_ch + 2) {
      CHECK(chaos.labels[i] == ModeLabel::Regular);
      CHECK(chaos.overlaps(i, i) > 0.9);
      CHECK(connected_mode(chaos, i) == i);
    }
  }
}

TEST_CASE("weak drive keeps the ground mode regular") {
  const auto p = q1(41);
  const DriveParams d{u::ghz_to_angular(0.3), kWd};
  const auto cfg = small(41);
  const FloquetBasis b = compute_floquet_basis(propagate_period(p, d, cfg), p, d, cfg);
  const auto chaos = classify_chaotic(b, static_spectrum(p));
  CHECK(chaos.labels[0] == ModeLabel::Regular);
  CHECK(chaos.overlaps(0, 0) > 0.9);
  CHECK(connected_mode(chaos, 0) == 0);
}

TEST_CASE("determinism") {
  const auto p = q1(21);
  const DriveParams d{u::ghz_to_angular(7.0), kWd};
  const auto cfg = small(21);
  const Matrix a = one_period_propagator(p, d, cfg);
  const Matrix b = one_period_propagator(p, d, cfg);
  CHECK((a - b).norm() == 0.0);
}
