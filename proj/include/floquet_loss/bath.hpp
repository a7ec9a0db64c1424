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

// Zero-temperature bath spectra J(omega) for the radiative, dielectric and
// quasiparticle-generation (QPG) channels. All J are rates in 1/s per unit |Psi|^2 and
// vanish for omega <= 0.

#include <cstdint>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>
#include <utility>

namespace floquet_loss {

struct RadiativeBath {
  double q_rad = 3830.0;
  void validate() const;
};

struct DielectricBath {
  double q_diel = 4.8e5;
  double omega_c = 0.0;  // rad/s
  double e_c = 0.0;      // rad/s
  void validate() const;
};

struct QpgBath {
  double e_j = 0.0;       // rad/s
  double delta_al = 0.0;  // rad/s
  double omega_c = 0.0;   // rad/s
  void validate() const;
};

enum class QpgBranch { Plus, Minus };

/// Reduced pair-breaking integrals at w = hbar*omega/Delta:
/// int_1^{w-1} (x(w-x) +- 1) / (sqrt(x^2-1) sqrt((w-x)^2-1)) dx, zero for w <= 2.
double s_plus_reduced(double w);
double s_minus_reduced(double w);

double s_plus(double omega, double delta_al);
double s_minus(double omega, double delta_al);

double j_rad(double omega, const RadiativeBath& bath);
double j_diel(double omega, const DielectricBath& bath);
double j_qpg(double omega, const QpgBath& bath, QpgBranch branch);

/// Effective junction conductance sigma = pi g_K J_plus / omega in siemens.
double qpg_conductance(double omega, const QpgBath& bath);

/// Thermal quasiparticle density sqrt(2 pi kT / Delta) exp(-Delta / kT); theta in kelvin,
/// delta_al in rad/s.
double x_qp_thermal(double theta, double delta_al);

/// Memoizes (S+, S-) by the exact bit pattern of omega. Concurrent readers share a lock;
/// insertion takes it exclusively. Results are identical to uncached evaluation.
class PairBreakingCache {
 public:
  explicit PairBreakingCache(double delta_al) : delta_al_(delta_al) {}

  std::pair<double, double> get(double omega);
  double delta_al() const { return delta_al_; }
  std::size_t size() const;

 private:
  double delta_al_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::uint64_t, std::pair<double, double>> values_;
};

/// J_plus and J_minus from one evaluation of the pair-breaking integrals.
std::pair<double, double> j_qpg_pair(double omega, const QpgBath& bath);
std::pair<double, double> j_qpg_pair(double omega, const QpgBath& bath, PairBreakingCache& cache);

}  // namespace floquet_loss
