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

// Floquet-Markov transition tensors, rates, steady state and the energy-loss rate.

#include "floquet_loss/bath.hpp"
#include "floquet_loss/floquet.hpp"
#include "floquet_loss/transmon.hpp"
#include "floquet_loss/units.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace floquet_loss {

enum class Mechanism { Rad, Diel, Qpg };

std::string_view to_string(Mechanism m);
Mechanism mechanism_from_string(std::string_view name);

/// Charge-basis operators a mechanism couples through.
std::vector<OperatorKind> coupling_kinds(Mechanism m);

/// Fourier-resolved matrix elements Psi_{ij,k} = (1/T) int <phi_i(t)|Psi|phi_j(t)> e^{-ik w_d t} dt
/// for i, j < n and |k| <= k_max.
struct TransitionTensor {
  OperatorKind kind = OperatorKind::Number;
  int n = 0;
  int k_max = 0;
  std::vector<Complex> elements;

  int harmonics() const { return 2 * k_max + 1; }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)) *
               static_cast<std::size_t>(harmonics()) +
           static_cast<std::size_t>(k + k_max);
  }
  Complex operator()(int i, int j, int k) const { return elements[index(i, j, k)]; }
};

/// Discrete transform of a sampled mode table. Requires k_max <= (n_t - 1) / 2.
TransitionTensor fourier_components(const ModeTable& table, const ChargeOperator& op, int k_max);

struct StreamedTensors {
  std::vector<TransitionTensor> tensors;  // same order as the requested kinds
  double edge_population = 0.0;           // worst over the sampled period
  bool used_time_reversal = false;
};

/// Same transform without materializing the mode table: the lowest n modes are propagated
/// once and the inner products are accumulated per sample. When the t = 0 modes are real
/// up to rounding, phi_i(T - t) = conj(phi_i(t)) and only half the period is propagated.
StreamedTensors stream_fourier_components(const FloquetBasis& basis, const TransmonParams& params,
                                          const DriveParams& drive, const NumericalConfig& cfg, int n,
                                          const std::vector<OperatorKind>& kinds);

struct BathSet {
  std::optional<RadiativeBath> rad;
  std::optional<DielectricBath> diel;
  std::optional<QpgBath> qpg;

  std::vector<Mechanism> mechanisms() const;
  void validate() const;
};

inline constexpr double kRadiativeBandLimit = units::ghz_to_angular(100.0);
inline constexpr double kRatePruneRelative = 1e-18;

/// Gamma_{ij,k} for one mechanism. delta(i,j,k) = eps_i - eps_j + k omega_d.
struct RateTensor {
  Mechanism mechanism = Mechanism::Rad;
  int n = 0;
  int k_max = 0;
  std::vector<double> rates;
  RealVector quasienergies;  // first n entries of the basis
  double omega_d = 0.0;

  int harmonics() const { return 2 * k_max + 1; }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)) *
               static_cast<std::size_t>(harmonics()) +
           static_cast<std::size_t>(k + k_max);
  }
  double operator()(int i, int j, int k) const { return rates[index(i, j, k)]; }
  double delta(int i, int j, int k) const {
    return quasienergies[i] - quasienergies[j] + static_cast<double>(k) * omega_d;
  }
  std::size_t nonzero_count() const;
};

/// Rates of one mechanism from its tensors (one for rad/diel, sin and cos for qpg).
/// `cache` memoizes the pair-breaking integrals across calls sharing the same delta grid.
RateTensor transition_rates(Mechanism mechanism, const std::vector<const TransitionTensor*>& tensors,
                            const RealVector& quasienergies, const BathSet& baths, double omega_d,
                            PairBreakingCache* cache = nullptr);

/// Zeroes entries below kRatePruneRelative times the largest rate over all tensors.
void prune_rates(std::vector<RateTensor>& tensors);

/// Gamma_ij = sum_k sum_mech Gamma_{ij,k}.
RealMatrix total_rate_matrix(const std::vector<RateTensor>& tensors);

struct SteadyState {
  RealVector populations;  // after the chaotic-layer exclusion
  RealVector stationary;   // exact null vector of the generator
  std::vector<std::string> warnings;
};

/// Stationary solution of dp_j/dt = sum_i p_i Gamma_ij - p_j sum_i Gamma_ji restricted to
/// the unique closed communicating class. Populations above index n_ch are then zeroed and
/// the rest renormalized; pass n_ch < 0 to keep every component.
SteadyState steady_state(const RealMatrix& gamma, int n_ch = -1);

/// Explicit integration of the same rate equation until ||dp/dt||_1 < tol.
RealVector relax_populations(const RealMatrix& gamma, double tol = 1e-12, long max_steps = 200000000);

/// max_j |sum_i p_i Gamma_ij - p_j sum_i Gamma_ji|.
double balance_residual(const RealMatrix& gamma, const RealVector& p);

struct LossReport {
  RealVector populations;
  double loss_total = 0.0;           // W
  double loss_photons = 0.0;         // loss_total / (hbar omega_d), 1/s
  std::map<Mechanism, double> loss_by_mechanism;  // W
  int n_ch = 0;
  int n_ch_used = 0;
  int n_active = 0;
  double omega_d = 0.0;
  std::vector<std::string> warnings;
};

/// T = hbar sum_{ijk} p_i Gamma_{ij,k} Delta_{ij,k}, per mechanism and total.
LossReport loss_rate(const RealVector& p, const std::vector<RateTensor>& tensors);

struct PipelineOptions {
  int n_active = 0;  // 0 selects max(2 N_ch, 60) capped at D
  double truncation_tolerance = 1e-6;
};

/// Everything that depends on the drive but not on bath parameters.
struct FloquetPoint {
  TransmonParams params;
  DriveParams drive;
  NumericalConfig cfg;
  FloquetBasis basis;
  ChaoticClassification chaos;
  int n_active = 0;
  std::vector<OperatorKind> kinds;
  std::vector<TransitionTensor> tensors;
  std::vector<std::string> warnings;

  const TransitionTensor& tensor(OperatorKind kind) const;
  int ground_connected() const { return connected_mode(chaos, 0); }
};

int default_active_modes(int n_ch, int dim);

FloquetPoint solve_floquet_point(const TransmonParams& params, const DriveParams& drive, const NumericalConfig& cfg,
                                 const std::vector<Mechanism>& mechanisms, const PipelineOptions& options = {});

struct PointEvaluation {
  std::vector<RateTensor> rates;
  RealMatrix gamma;
  LossReport report;
};

PointEvaluation evaluate_point(const FloquetPoint& point, const BathSet& baths, PairBreakingCache* cache = nullptr);

LossReport simulate_point(const TransmonParams& params, const DriveParams& drive, const NumericalConfig& cfg,
                          const BathSet& baths, const PipelineOptions& options = {});

/// Mean of two reports: totals and per-mechanism parts averaged; populations and counts
/// taken from `a`; warnings concatenated.
LossReport mean_loss(const LossReport& a, const LossReport& b);

/// Mean of the loss at n_g_static -/+ 0.25. The reported populations are those of the lower
/// offset; per-mechanism parts are averaged.
LossReport parity_averaged_loss(const TransmonParams& params, const DriveParams& drive, const NumericalConfig& cfg,
                                const BathSet& baths, double n_g_static, const PipelineOptions& options = {});

}  // namespace floquet_loss
