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

// One-period propagation, Floquet modes/quasienergies, period-averaged energies and
// chaotic-layer classification for the driven transmon.

#include "floquet_loss/transmon.hpp"

#include <functional>
#include <string>
#include <vector>

namespace floquet_loss {

struct NumericalConfig {
  int dim = 401;
  int k_max = 200;
  int n_t = 2001;       // mode-table samples per period
  int n_big_t = 20001;  // propagation grid points per period

  void validate() const;

  /// Midpoint steps per period: at least n_big_t - 1, rounded up to a multiple of n_t so
  /// that every mode-table sample falls on a step boundary.
  int propagation_steps() const;
  int steps_per_sample() const { return propagation_steps() / n_t; }
};

/// Piecewise-constant midpoint propagator over one drive period. Each step applies
/// exp(-i H(t_mid) dt) through a Chebyshev expansion whose truncation error is below
/// double precision, so the product is unitary to rounding.
class PeriodicPropagator {
 public:
  PeriodicPropagator(const TransmonParams& params, const DriveParams& drive, const NumericalConfig& cfg);

  int steps() const { return steps_; }
  int samples() const { return samples_; }
  int steps_per_sample() const { return steps_per_sample_; }
  double period() const { return period_; }
  double step_size() const { return dt_; }
  double sample_time(int s) const { return period_ * static_cast<double>(s) / static_cast<double>(samples_); }
  int chebyshev_terms() const { return static_cast<int>(coeffs_.size()); }

  /// Applies step `index` (covering [index*dt, (index+1)*dt]) to every column of `block`.
  void step(Matrix& block, int index) const;

  /// Propagates `block` across one full period. `on_sample(s, t_s, block)` is called at each
  /// of the n_t sample times t_s = s*T/n_t before stepping past it.
  void propagate(Matrix& block, const std::function<void(int, double, const Matrix&)>& on_sample) const;

  /// y = H(t) x with H the tridiagonal charge-basis Hamiltonian at time t.
  void apply_hamiltonian(double t, const Matrix& x, Matrix& y) const;

  const TransmonParams& params() const { return params_; }
  const DriveParams& drive() const { return drive_; }

 private:
  TransmonParams params_;
  DriveParams drive_;
  TridiagonalHamiltonian tri_;
  int steps_ = 0;
  int samples_ = 0;
  int steps_per_sample_ = 0;
  double period_ = 0.0;
  double dt_ = 0.0;
  double center_ = 0.0;
  double half_width_ = 0.0;
  std::vector<Complex> coeffs_;
  mutable std::vector<double> work_;
};

/// U(T, 0) together with the period average of U(t)^dagger H(t) U(t) over the sample grid.
struct PeriodPropagation {
  Matrix propagator;
  Matrix averaged_heisenberg_hamiltonian;
};

PeriodPropagation propagate_period(const TransmonParams& params, const DriveParams& drive, const NumericalConfig& cfg);

Matrix one_period_propagator(const TransmonParams& params, const DriveParams& drive, const NumericalConfig& cfg);

double unitarity_defect(const Matrix& u);

struct FloquetBasis {
  Matrix modes0;              // column i = |phi_i(0)>, canonical order (ascending averaged energy)
  RealVector quasienergies;   // rad/s, folded into (-omega_d/2, omega_d/2]
  RealVector avg_energy;      // rad/s
  std::vector<int> order;     // canonical index -> raw eigensolver index
  double omega_d = 0.0;
  std::vector<std::string> warnings;

  int dim() const { return static_cast<int>(modes0.cols()); }
};

double fold_quasienergy(double eps, double omega_d);

/// Eigendecomposition of U. The averaged energies are computed with a second pass over the
/// period; use the PeriodPropagation overload to reuse the first pass.
FloquetBasis compute_floquet_basis(const Matrix& u, const TransmonParams& params, const DriveParams& drive,
                                   const NumericalConfig& cfg);
FloquetBasis compute_floquet_basis(const PeriodPropagation& prop, const TransmonParams& params,
                                   const DriveParams& drive, const NumericalConfig& cfg);

struct ModeTable {
  std::vector<Matrix> samples;  // samples[s].col(c) = |phi_{columns[c]}(t_s)>
  std::vector<double> times;
  std::vector<int> columns;
  double period = 0.0;
  double closure_fidelity = 1.0;  // min_i |<phi_i(0)| phi_i(T)>|^2 after one more full period
};

/// Samples |phi_i(t)> = exp(+i eps_i t) U(t,0) |phi_i(0)> at t_s = s T / n_t. An empty
/// `columns` selects every mode.
ModeTable mode_table(const FloquetBasis& basis, const TransmonParams& params, const DriveParams& drive,
                     const NumericalConfig& cfg, std::vector<int> columns = {});

/// Trapezoid (periodic) average of <phi_i(t)|H_q(t)|phi_i(t)> over the table samples.
RealVector averaged_energy(const FloquetBasis& basis, const ModeTable& table, const TransmonParams& params,
                           const DriveParams& drive);

enum class ModeLabel { Regular, Chaotic };

struct ChaoticClassification {
  int n_ch = 0;
  RealMatrix overlaps;             // overlaps(i, j) = |<j|phi_i(0)>|^2
  std::vector<ModeLabel> labels;
  double threshold = 0.5;
};

inline constexpr double kRegularOverlapThreshold = 0.5;

/// A mode is Regular if its largest overlap with an undriven eigenstate reaches `threshold`.
ChaoticClassification classify_chaotic(const FloquetBasis& basis, const StaticSpectrum& eigenbasis,
                                       double threshold = kRegularOverlapThreshold);

/// Canonical index of the mode with the largest overlap with undriven eigenstate `j`.
int connected_mode(const ChaoticClassification& chaos, int j);

}  // namespace floquet_loss
