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

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <string>

namespace floquet_loss {

void TransmonParams::validate() const {
  if (dim < 3 || dim % 2 == 0) {
    throw std::invalid_argument("transmon dimension must be odd and >= 3, got " + std::to_string(dim));
  }
  if (!(e_c > 0.0)) throw std::invalid_argument("E_C must be positive");
  if (!(e_j >= 0.0)) throw std::invalid_argument("E_J must be non-negative");
  if (!std::isfinite(n_g)) throw std::invalid_argument("n_g must be finite");
}

void DriveParams::validate() const {
  if (!(omega_d > 0.0) || !std::isfinite(omega_d)) throw std::invalid_argument("drive frequency must be positive");
  if (!(omega_q >= 0.0) || !std::isfinite(omega_q)) throw std::invalid_argument("drive amplitude must be non-negative");
}

double DriveParams::period() const { return units::two_pi / omega_d; }

std::string_view to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::Number: return "number";
    case OperatorKind::Phase: return "phase";
    case OperatorKind::SinHalfPhase: return "sin_half_phase";
    case OperatorKind::CosHalfPhase: return "cos_half_phase";
    case OperatorKind::StaticHamiltonian: return "static_hamiltonian";
  }
  return "unknown";
}

TridiagonalHamiltonian static_tridiagonal(const TransmonParams& params) {
  params.validate();
  TridiagonalHamiltonian h;
  h.diagonal.resize(params.dim);
  h.charges.resize(params.dim);
  for (int idx = 0; idx < params.dim; ++idx) {
    const double m = charge_of_index(idx, params.dim);
    h.charges[idx] = m;
    h.diagonal[idx] = 4.0 * params.e_c * (m - params.n_g) * (m - params.n_g);
  }
  h.off_diagonal = -0.5 * params.e_j;
  return h;
}

ChargeOperator build_static_hamiltonian(const TransmonParams& params) {
  const TridiagonalHamiltonian tri = static_tridiagonal(params);
  const int d = params.dim;
  Matrix h = Matrix::Zero(d, d);
  for (int idx = 0; idx < d; ++idx) {
    h(idx, idx) = tri.diagonal[idx];
    if (idx + 1 < d) {
      h(idx, idx + 1) = tri.off_diagonal;
      h(idx + 1, idx) = tri.off_diagonal;
    }
  }
  return {OperatorKind::StaticHamiltonian, std::move(h)};
}

namespace {

double parity_sign(int p) { return (p % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

ChargeOperator build_coupling_operator(OperatorKind kind, int dim) {
  if (dim < 3 || dim % 2 == 0) {
    throw std::invalid_argument("operator dimension must be odd and >= 3, got " + std::to_string(dim));
  }
  const Complex i_unit{0.0, 1.0};
  Matrix op = Matrix::Zero(dim, dim);
  for (int row = 0; row < dim; ++row) {
    const int n = charge_of_index(row, dim);
    for (int col = 0; col < dim; ++col) {
      const int m = charge_of_index(col, dim);
      const int diff = n - m;
      switch (kind) {
        case OperatorKind::Number:
          if (diff == 0) op(row, col) = static_cast<double>(m);
          break;
        case OperatorKind::Phase:
          if (diff != 0) op(row, col) = i_unit * parity_sign(diff + 1) / static_cast<double>(diff);
          break;
        case OperatorKind::SinHalfPhase: {
          const double d = diff;
          op(row, col) = (i_unit / units::pi) * parity_sign(diff + 1) * d / (d * d - 0.25);
          break;
        }
        case OperatorKind::CosHalfPhase: {
          const double d = diff;
          op(row, col) = (i_unit / (2.0 * units::pi)) * parity_sign(diff) / (d * d - 0.25);
          break;
        }
        default:
          throw std::invalid_argument("not a coupling operator kind: " + std::string(to_string(kind)));
      }
    }
  }
  return {kind, std::move(op)};
}

Matrix hamiltonian_at_time(const TransmonParams& params, const DriveParams& drive, double t) {
  drive.validate();
  if (!std::isfinite(t)) throw std::invalid_argument("time must be finite");
  Matrix h = build_static_hamiltonian(params).matrix;
  const double amp = drive.omega_q * std::cos(drive.omega_d * t);
  for (int idx = 0; idx < params.dim; ++idx) {
    h(idx, idx) += amp * static_cast<double>(charge_of_index(idx, params.dim));
  }
  return h;
}

double hermitian_deviation(const Matrix& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

StaticSpectrum static_spectrum(const TransmonParams& params) {
  const TridiagonalHamiltonian tri = static_tridiagonal(params);
  RealVector sub = RealVector::Constant(params.dim - 1, tri.off_diagonal);
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver;
  solver.computeFromTridiagonal(tri.diagonal, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw std::runtime_error("static eigensolver failed");
  StaticSpectrum spec{solver.eigenvalues(), solver.eigenvectors()};
  // Sign convention: largest-magnitude component positive.
  for (int j = 0; j < spec.states.cols(); ++j) {
    Eigen::Index arg = 0;
    spec.states.col(j).cwiseAbs().maxCoeff(&arg);
    if (spec.states(arg, j) < 0.0) spec.states.col(j) *= -1.0;
  }
  return spec;
}

double edge_population(const Matrix& columns, int edge_states) {
  const int d = static_cast<int>(columns.rows());
  const int per_side = std::max(1, edge_states / 2);
  double worst = 0.0;
  for (int c = 0; c < columns.cols(); ++c) {
    double w = 0.0;
    for (int k = 0; k < per_side && k < d; ++k) {
      w += std::norm(columns(k, c));
      if (d - 1 - k != k) w += std::norm(columns(d - 1 - k, c));
    }
    worst = std::max(worst, w);
  }
  return worst;
}

}  // namespace floquet_loss
