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

// Driven transmon in the Cooper-pair charge basis |C_m>, m = -(D-1)/2 ... (D-1)/2.
//
//   H_q(t) = 4 E_C (n - n_g)^2 - E_J cos(phi) + hbar Omega_q n cos(omega_d t)
//
// All energies are angular frequencies (E / hbar, rad/s).

#include <Eigen/Dense>

#include <complex>
#include <string_view>

namespace floquet_loss {

using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Complex = std::complex<double>;

struct TransmonParams {
  double e_c = 0.0;  // rad/s
  double e_j = 0.0;  // rad/s
  double n_g = 0.0;
  int dim = 0;       // odd, >= 3

  void validate() const;
  int max_charge() const { return (dim - 1) / 2; }
};

struct DriveParams {
  double omega_q = 0.0;  // rad/s
  double omega_d = 0.0;  // rad/s

  void validate() const;
  double period() const;
};

enum class OperatorKind { Number, Phase, SinHalfPhase, CosHalfPhase, StaticHamiltonian };

std::string_view to_string(OperatorKind kind);

struct ChargeOperator {
  OperatorKind kind = OperatorKind::Number;
  Matrix matrix;
};

/// Charge m carried by basis index idx.
inline int charge_of_index(int idx, int dim) { return idx - (dim - 1) / 2; }

/// Real symmetric tridiagonal form of the undriven Hamiltonian: diagonal 4E_C(m-n_g)^2,
/// constant first off-diagonal -E_J/2.
struct TridiagonalHamiltonian {
  RealVector diagonal;
  double off_diagonal = 0.0;
  RealVector charges;  // m for each basis index; the drive adds Omega_q cos(omega_d t) * charges
};

TridiagonalHamiltonian static_tridiagonal(const TransmonParams& params);

ChargeOperator build_static_hamiltonian(const TransmonParams& params);

/// Charge-basis matrix elements of n, phi, sin(phi/2), cos(phi/2).
/// Number is m*delta_nm. The half-phase operators carry the overall factor i of their
/// closed forms; rates only ever use |<.|.|.>|^2.
ChargeOperator build_coupling_operator(OperatorKind kind, int dim);

Matrix hamiltonian_at_time(const TransmonParams& params, const DriveParams& drive, double t);

/// max |A - A^dagger| over all elements.
double hermitian_deviation(const Matrix& a);

/// Static eigenpairs, ascending.
struct StaticSpectrum {
  RealVector energies;   // rad/s
  RealMatrix states;     // column j = |j>
};

StaticSpectrum static_spectrum(const TransmonParams& params);

/// Summed weight of the given columns on the `edge_states` outermost charge states
/// (split evenly between both ends).
double edge_population(const Matrix& columns, int edge_states = 4);

}  // namespace floquet_loss
