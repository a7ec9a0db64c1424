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

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace floquet_loss {

void RadiativeBath::validate() const {
  if (!(q_rad > 0.0) || !std::isfinite(q_rad)) throw std::invalid_argument("q_rad must be positive");
}

void DielectricBath::validate() const {
  if (!(q_diel > 0.0) || !std::isfinite(q_diel)) throw std::invalid_argument("q_diel must be positive");
  if (!(omega_c > 0.0)) throw std::invalid_argument("dielectric cutoff must be positive");
  if (!(e_c > 0.0)) throw std::invalid_argument("dielectric bath needs e_c > 0");
}

void QpgBath::validate() const {
  if (!(e_j >= 0.0)) throw std::invalid_argument("qpg bath needs e_j >= 0");
  if (!(delta_al > 0.0)) throw std::invalid_argument("delta_al must be positive");
  if (!(omega_c > 0.0)) throw std::invalid_argument("qpg cutoff must be positive");
}

namespace {

constexpr double kQuadratureTolerance = 1e-8;

// The integrand is symmetric under x -> w - x, so twice the half-range integral suffices.
// On [1, w/2] put x = 1 + u^2 (removes the inverse-square-root endpoint) and u = v sqrt(d/2)
// with d = w - 2. With a = x - 1 and b = w - x - 1 (a + b = d) the integrand becomes
// 2 (a + b + ab + 1 +- 1) / (sqrt(2 + a) sqrt(2 - v^2) sqrt(b + 2)) on v in [0, 1], free of
// cancellation near threshold.
double reduced_integral(double w, bool plus) {
  if (!(w > 2.0)) return 0.0;
  const double d = w - 2.0;
  const auto f = [d, plus](double v) {
    const double a = 0.5 * d * v * v;
    const double b = d - a;
    const double numerator = d + a * b + (plus ? 2.0 : 0.0);
    return 2.0 * numerator / (std::sqrt(2.0 + a) * std::sqrt(2.0 - v * v) * std::sqrt(b + 2.0));
  };
  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, 0.0, 1.0, 20, kQuadratureTolerance * 1e-2, &error, &l1);
  if (!(error <= kQuadratureTolerance * l1)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "pair-breaking quadrature did not converge at w=" << w << ": estimate " << 2.0 * value
        << ", error bound " << 2.0 * error;
    throw std::runtime_error(msg.str());
  }
  return 2.0 * value;
}

}  // namespace

double s_plus_reduced(double w) { return reduced_integral(w, true); }
double s_minus_reduced(double w) { return reduced_integral(w, false); }

double s_plus(double omega, double delta_al) { return s_plus_reduced(omega / delta_al); }
double s_minus(double omega, double delta_al) { return s_minus_reduced(omega / delta_al); }

double j_rad(double omega, const RadiativeBath& bath) {
  if (!(omega > 0.0)) return 0.0;
  return omega / bath.q_rad;
}

double j_diel(double omega, const DielectricBath& bath) {
  if (!(omega > 0.0)) return 0.0;
  return omega * omega / (4.0 * bath.e_c * bath.q_diel) * std::exp(-omega / bath.omega_c);
}

namespace {

double qpg_prefactor(double omega, const QpgBath& bath) {
  const double r = omega / bath.omega_c;
  return 16.0 * bath.e_j / units::two_pi / (1.0 + r * r);
}

bool below_gap(double omega, const QpgBath& bath) { return !(omega >= 2.0 * bath.delta_al); }

}  // namespace

double j_qpg(double omega, const QpgBath& bath, QpgBranch branch) {
  if (below_gap(omega, bath)) return 0.0;
  const double s = branch == QpgBranch::Plus ? s_plus(omega, bath.delta_al) : s_minus(omega, bath.delta_al);
  return qpg_prefactor(omega, bath) * s;
}

std::pair<double, double> j_qpg_pair(double omega, const QpgBath& bath) {
  if (below_gap(omega, bath)) return {0.0, 0.0};
  const double pre = qpg_prefactor(omega, bath);
  return {pre * s_plus(omega, bath.delta_al), pre * s_minus(omega, bath.delta_al)};
}

std::pair<double, double> j_qpg_pair(double omega, const QpgBath& bath, PairBreakingCache& cache) {
  if (below_gap(omega, bath)) return {0.0, 0.0};
  const auto [sp, sm] = cache.get(omega);
  const double pre = qpg_prefactor(omega, bath);
  return {pre * sp, pre * sm};
}

double qpg_conductance(double omega, const QpgBath& bath) {
  if (!(omega > 0.0)) throw std::invalid_argument("qpg_conductance needs omega > 0");
  return units::pi * units::klitzing_conductance * j_qpg(omega, bath, QpgBranch::Plus) / omega;
}

double x_qp_thermal(double theta, double delta_al) {
  if (!(theta > 0.0)) throw std::invalid_argument("temperature must be positive");
  const double kt = units::boltzmann * theta;
  const double gap = units::hbar * delta_al;
  return std::sqrt(units::two_pi * kt / gap) * std::exp(-gap / kt);
}

std::pair<double, double> PairBreakingCache::get(double omega) {
  const auto key = std::bit_cast<std::uint64_t>(omega);
  {
    std::shared_lock lock(mutex_);
    const auto it = values_.find(key);
    if (it != values_.end()) return it->second;
  }
  const std::pair<double, double> v{s_plus(omega, delta_al_), s_minus(omega, delta_al_)};
  std::unique_lock lock(mutex_);
  values_.emplace(key, v);
  return v;
}

std::size_t PairBreakingCache::size() const {
  std::shared_lock lock(mutex_);
  return values_.size();
}

}  // namespace floquet_loss
