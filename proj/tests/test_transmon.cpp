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

#include "floquet_loss/transmon.hpp"
#include "floquet_loss/units.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace floquet_loss;
namespace u = floquet_loss::units;

namespace {

TransmonParams q1(double n_g, int dim) {
  return {u::ghz_to_angular(0.259), u::ghz_to_angular(14.24), n_g, dim};
}

// <n| f(phi) |m> = (1/2pi) int_{-pi}^{pi} f(phi) e^{-i (n-m) phi} dphi, composite Gauss-Legendre.
Complex fourier_element(double (*f)(double), int diff) {
  static const double x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                              0.9061798459386640};
  static const double w[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                              0.2369268850561891};
  const int panels = 4000;
  const double h = u::two_pi / panels;
  Complex sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = -u::pi + (p + 0.5) * h;
    for (int q = 0; q < 5; ++q) {
      const double phi = mid + 0.5 * h * x[q];
      sum += 0.5 * h * w[q] * f(phi) * std::exp(Complex(0.0, -diff * phi));
    }
  }
  return sum / u::two_pi;
}

double phase_fn(double phi) { return phi; }
double sin_half_fn(double phi) { return std::sin(phi / 2.0); }
double cos_half_fn(double phi) { return std::cos(phi / 2.0); }

}  // namespace

TEST_CASE("static Hamiltonian entries for the Q1 junction") {
  const auto p = q1(0.25, 5);
  const Matrix h = build_static_hamiltonian(p).matrix;
  for (int idx = 0; idx < 5; ++idx) {
    const double m = charge_of_index(idx, 5);
    CHECK(u::angular_to_ghz(h(idx, idx).real()) == doctest::Approx(4.0 * 0.259 * (m - 0.25) * (m - 0.25)).epsilon(1e-14).scale(0.0));
    if (idx + 1 < 5) {
      CHECK(u::angular_to_ghz(h(idx, idx + 1).real()) == doctest::Approx(-7.12).epsilon(1e-14).scale(0.0));
      CHECK(h(idx + 1, idx) == h(idx, idx + 1));
    }
    for (int col = idx + 2; col < 5; ++col) CHECK(h(idx, col) == Complex(0.0));
  }
  CHECK(hermitian_deviation(h) == 0.0);
}

TEST_CASE("decoupled charge states when E_J vanishes") {
  const TransmonParams p{u::ghz_to_angular(0.3), 0.0, 0.0, 7};
  const Matrix h = build_static_hamiltonian(p).matrix;
  CHECK((h - Matrix(h.diagonal().asDiagonal())).norm() == 0.0);
  const auto spec = static_spectrum(p);
  CHECK(std::abs(spec.states(3, 0)) == doctest::Approx(1.0).epsilon(1e-15).scale(0.0));
  CHECK(spec.energies[0] == doctest::Approx(0.0));
}

TEST_CASE("3x3 spectrum against a closed-form eigensolve") {
  // H = E * [[4,-1/2,0],[-1/2,0,-1/2],[0,-1/2,4]]; antisymmetric vector gives 4E, the
  // symmetric block gives 2E -/+ sqrt(4E^2 + E^2/2).
  const double e = u::ghz_to_angular(1.0);
  const auto spec = static_spectrum({e, e, 0.0, 3});
  const double r = std::sqrt(4.0 + 0.5);
  CHECK(spec.energies[0] / e == doctest::Approx(2.0 - r).epsilon(1e-12).scale(0.0));
  CHECK(spec.energies[1] / e == doctest::Approx(4.0).epsilon(1e-12).scale(0.0));
  CHECK(spec.energies[2] / e == doctest::Approx(2.0 + r).epsilon(1e-12).scale(0.0));
}

TEST_CASE("dimension must be odd and at least 3") {
  CHECK_THROWS_AS(build_static_hamiltonian(q1(0.0, 4)), std::invalid_argument);
  CHECK_THROWS_AS(build_static_hamiltonian(q1(0.0, 1)), std::invalid_argument);
  CHECK_THROWS_AS(build_coupling_operator(OperatorKind::Number, 6), std::invalid_argument);
  CHECK_THROWS_AS(build_coupling_operator(OperatorKind::StaticHamiltonian, 5), std::invalid_argument);
}

TEST_CASE("coupling operator closed forms") {
  const int d = 7;
  const int zero = 3;  // index of charge 0
  const Matrix num = build_coupling_operator(OperatorKind::Number, d).matrix;
  for (int i = 0; i < d; ++i) CHECK(num(i, i) == Complex(charge_of_index(i, d)));
  CHECK(hermitian_deviation(num) == 0.0);

  const Matrix phase = build_coupling_operator(OperatorKind::Phase, d).matrix;
  CHECK(phase(zero, zero + 1) == Complex(0.0, -1.0));
  CHECK(phase(zero, zero) == Complex(0.0));
  CHECK(hermitian_deviation(phase) < 1e-12);

  const Matrix s = build_coupling_operator(OperatorKind::SinHalfPhase, d).matrix;
  const Matrix c = build_coupling_operator(OperatorKind::CosHalfPhase, d).matrix;
  for (int i = 0; i < d; ++i) {
    CHECK(s(i, i) == Complex(0.0));
    CHECK(std::abs(c(i, i)) == doctest::Approx(2.0 / u::pi).epsilon(1e-15).scale(0.0));
  }
}

TEST_CASE("operator magnitudes match the Fourier integral over one phase period") {
  const int d = 9;
  struct Case {
    OperatorKind kind;
    double (*f)(double);
  };
  for (const Case& cs : {Case{OperatorKind::Phase, phase_fn}, Case{OperatorKind::SinHalfPhase, sin_half_fn},
                         Case{OperatorKind::CosHalfPhase, cos_half_fn}}) {
    CAPTURE(to_string(cs.kind));
    const Matrix op = build_coupling_operator(cs.kind, d).matrix;
    for (int diff = -(d - 1); diff <= d - 1; ++diff) {
      const double oracle = std::abs(fourier_element(cs.f, diff));
      const int row = diff >= 0 ? diff : 0;
      const int col = row - diff;
      CAPTURE(diff);
      CHECK(std::abs(std::abs(op(row, col)) - oracle) < 1e-12);
    }
  }
}

TEST_CASE("Toeplitz structure of the coupling operators") {
  const int d = 11;
  for (auto kind : {OperatorKind::Number, OperatorKind::Phase, OperatorKind::SinHalfPhase,
                    OperatorKind::CosHalfPhase}) {
    const Matrix op = build_coupling_operator(kind, d).matrix;
    for (int i = 1; i < d; ++i)
      for (int j = 1; j < d; ++j)
        if (kind != OperatorKind::Number) CHECK(op(i, j) == op(i - 1, j - 1));
  }
}

TEST_CASE("driven Hamiltonian") {
  const auto p = q1(0.25, 9);
  const DriveParams none{0.0, u::ghz_to_angular(4.284)};
  const Matrix h0 = build_static_hamiltonian(p).matrix;
  CHECK((hamiltonian_at_time(p, none, 0.37e-9) - h0).norm() == 0.0);

  const DriveParams drive{u::ghz_to_angular(40.0), u::ghz_to_angular(4.284)};
  const double node = u::pi / (2.0 * drive.omega_d);
  CHECK((hamiltonian_at_time(p, drive, node) - h0).cwiseAbs().maxCoeff() < 1e-15 * h0.cwiseAbs().maxCoeff() * 10);

  const Matrix h = hamiltonian_at_time(p, drive, 0.0);
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) {
      const Complex expect = h0(i, j) + (i == j ? drive.omega_q * charge_of_index(i, 9) : 0.0);
      CHECK(h(i, j) == expect);
    }
  CHECK(hermitian_deviation(hamiltonian_at_time(p, drive, 0.123e-9)) == 0.0);
  CHECK_THROWS(hamiltonian_at_time(p, drive, std::nan("")));
}

TEST_CASE("Hermiticity for random parameters") {
  std::srand(7);
  for (int trial = 0; trial < 20; ++trial) {
    const double r1 = std::rand() / double(RAND_MAX), r2 = std::rand() / double(RAND_MAX);
    const TransmonParams p{u::ghz_to_angular(0.1 + r1), u::ghz_to_angular(5 + 20 * r2), r1 - 0.5, 3 + 2 * (trial % 10)};
    const DriveParams d{u::ghz_to_angular(60 * r2), u::ghz_to_angular(3 + r1)};
    CHECK(hermitian_deviation(hamiltonian_at_time(p, d, r1 * d.period())) < 1e-12);
    CHECK(hermitian_deviation(build_coupling_operator(OperatorKind::Phase, p.dim).matrix) < 1e-12);
  }
}

TEST_CASE("edge population of localized and bulk states") {
  Matrix cols = Matrix::Zero(9, 2);
  cols(0, 0) = 1.0;
  cols(4, 1) = 1.0;
  CHECK(edge_population(cols) == doctest::Approx(1.0));
  CHECK(edge_population(cols.col(1)) == 0.0);
  const auto spec = static_spectrum(q1(0.25, 41));
  CHECK(edge_population(spec.states.leftCols(5).cast<Complex>()) < 1e-20);
}
