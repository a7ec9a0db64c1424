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

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace floquet_loss {

void NumericalConfig::validate() const {
  if (dim < 3 || dim % 2 == 0) throw std::invalid_argument("numerical.dim must be odd and >= 3");
  if (k_max < 1) throw std::invalid_argument("numerical.k_max must be positive");
  if (n_t < 3) throw std::invalid_argument("numerical.n_t must be >= 3");
  if (n_big_t < 3) throw std::invalid_argument("numerical.n_big_t must be >= 3");
}

int NumericalConfig::propagation_steps() const {
  const int requested = n_big_t - 1;
  const int per_sample = std::max(1, (requested + n_t - 1) / n_t);
  return per_sample * n_t;
}

namespace {

constexpr double kChebyshevTolerance = 1e-18;
constexpr double kUnitarityTolerance = 1e-8;
constexpr double kClosureTolerance = 1e-6;
constexpr double kSchurTolerance = 1e-6;

std::vector<Complex> chebyshev_coefficients(double x, double phase) {
  // exp(-i x X) = J0(x) + 2 sum_k (-i)^k J_k(x) T_k(X), times the centring phase.
  std::vector<Complex> c;
  const Complex rot = std::polar(1.0, -phase);
  Complex minus_i_pow{1.0, 0.0};
  for (int k = 0;; ++k) {
    const double jk = std::cyl_bessel_j(static_cast<double>(k), x);
    c.push_back((k == 0 ? 1.0 : 2.0) * jk * minus_i_pow * rot);
    minus_i_pow *= Complex{0.0, -1.0};
    if (k > x && k >= 2 && std::abs(jk) < kChebyshevTolerance) break;
    if (k > 200) throw std::runtime_error("Chebyshev expansion did not converge; reduce the step size");
  }
  return c;
}

// y = (diag * x + off * shift(x)) for a tridiagonal operator, column by column.
void tridiagonal_apply(const double* dg, double off, const Complex* x, Complex* y, Eigen::Index n,
                       Eigen::Index cols) {
  for (Eigen::Index c = 0; c < cols; ++c) {
    const Complex* xc = x + c * n;
    Complex* yc = y + c * n;
    yc[0] = dg[0] * xc[0] + off * xc[1];
    for (Eigen::Index i = 1; i + 1 < n; ++i) yc[i] = dg[i] * xc[i] + off * (xc[i - 1] + xc[i + 1]);
    yc[n - 1] = dg[n - 1] * xc[n - 1] + off * xc[n - 2];
  }
}

}  // namespace

PeriodicPropagator::PeriodicPropagator(const TransmonParams& params, const DriveParams& drive,
                                       const NumericalConfig& cfg)
    : params_(params), drive_(drive) {
  params.validate();
  drive.validate();
  cfg.validate();
  if (cfg.dim != params.dim) throw std::invalid_argument("numerical.dim does not match transmon dimension");
  tri_ = static_tridiagonal(params);
  steps_ = cfg.propagation_steps();
  samples_ = cfg.n_t;
  steps_per_sample_ = steps_ / samples_;
  period_ = drive.period();
  dt_ = period_ / static_cast<double>(steps_);

  // Gershgorin bounds valid for every t in the period.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < params.dim; ++i) {
    const double swing = drive.omega_q * std::abs(tri_.charges[i]);
    lo = std::min(lo, tri_.diagonal[i] - swing);
    hi = std::max(hi, tri_.diagonal[i] + swing);
  }
  const double radius = 2.0 * std::abs(tri_.off_diagonal);
  lo -= radius;
  hi += radius;
  center_ = 0.5 * (hi + lo);
  half_width_ = std::max(0.5 * (hi - lo), 1e-300);
  coeffs_ = chebyshev_coefficients(half_width_ * dt_, center_ * dt_);
}

void PeriodicPropagator::apply_hamiltonian(double t, const Matrix& x, Matrix& y) const {
  const Eigen::Index n = x.rows();
  const double amp = drive_.omega_q * std::cos(drive_.omega_d * t);
  RealVector dg = tri_.diagonal + amp * tri_.charges;
  y.resize(n, x.cols());
  tridiagonal_apply(dg.data(), tri_.off_diagonal, x.data(), y.data(), n, x.cols());
}

void PeriodicPropagator::step(Matrix& block, int index) const {
  const Eigen::Index n = block.rows();
  const Eigen::Index cols = block.cols();
  const double t_mid = (static_cast<double>(index) + 0.5) * dt_;
  const double amp = drive_.omega_q * std::cos(drive_.omega_d * t_mid);
  const double inv_r = 1.0 / half_width_;
  // Interleaved (re, im) storage: the tridiagonal map is real, so it acts on the raw
  // doubles with neighbour stride 2 and a duplicated diagonal. Columns are independent
  // and are run through the whole recurrence one at a time to stay in cache.
  const Eigen::Index len = 2 * n;
  work_.resize(4 * len);
  double* dg = work_.data();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = (tri_.diagonal[i] + amp * tri_.charges[i] - center_) * inv_r;
    dg[2 * i] = v;
    dg[2 * i + 1] = v;
  }
  const double off = tri_.off_diagonal * inv_r;
  const double two_off = 2.0 * off;
  const std::size_t terms = coeffs_.size();

  auto* data = reinterpret_cast<double*>(block.data());
  for (Eigen::Index c = 0; c < cols; ++c) {
    double* a = data + c * len;
    double* prev = work_.data() + len;
    double* cur = work_.data() + 2 * len;
    double* next = work_.data() + 3 * len;
    std::copy(a, a + len, prev);

    cur[0] = dg[0] * prev[0] + off * prev[2];
    cur[1] = dg[1] * prev[1] + off * prev[3];
    for (Eigen::Index e = 2; e + 2 < len; ++e) cur[e] = dg[e] * prev[e] + off * (prev[e - 2] + prev[e + 2]);
    cur[len - 2] = dg[len - 2] * prev[len - 2] + off * prev[len - 4];
    cur[len - 1] = dg[len - 1] * prev[len - 1] + off * prev[len - 3];
    {
      const double c0r = coeffs_[0].real(), c0i = coeffs_[0].imag();
      const double c1r = coeffs_[1].real(), c1i = coeffs_[1].imag();
      for (Eigen::Index e = 0; e < len; e += 2) {
        a[e] = c0r * prev[e] - c0i * prev[e + 1] + c1r * cur[e] - c1i * cur[e + 1];
        a[e + 1] = c0r * prev[e + 1] + c0i * prev[e] + c1r * cur[e + 1] + c1i * cur[e];
      }
    }
    for (std::size_t k = 2; k < terms; ++k) {
      const double cr = coeffs_[k].real();
      const double ci = coeffs_[k].imag();
      next[0] = 2.0 * dg[0] * cur[0] + two_off * cur[2] - prev[0];
      next[1] = 2.0 * dg[1] * cur[1] + two_off * cur[3] - prev[1];
      for (Eigen::Index e = 2; e + 2 < len; ++e)
        next[e] = 2.0 * dg[e] * cur[e] + two_off * (cur[e - 2] + cur[e + 2]) - prev[e];
      next[len - 2] = 2.0 * dg[len - 2] * cur[len - 2] + two_off * cur[len - 4] - prev[len - 2];
      next[len - 1] = 2.0 * dg[len - 1] * cur[len - 1] + two_off * cur[len - 3] - prev[len - 1];
      for (Eigen::Index e = 0; e < len; e += 2) {
        a[e] += cr * next[e] - ci * next[e + 1];
        a[e + 1] += cr * next[e + 1] + ci * next[e];
      }
      double* spare = prev;
      prev = cur;
      cur = next;
      next = spare;
    }
  }
}

void PeriodicPropagator::propagate(Matrix& block,
                                   const std::function<void(int, double, const Matrix&)>& on_sample) const {
  for (int s = 0; s < samples_; ++s) {
    if (on_sample) on_sample(s, sample_time(s), block);
    for (int j = 0; j < steps_per_sample_; ++j) step(block, s * steps_per_sample_ + j);
  }
}

double unitarity_defect(const Matrix& u) {
  const Matrix id = Matrix::Identity(u.cols(), u.cols());
  return (u.adjoint() * u - id).cwiseAbs().maxCoeff();
}

namespace {

void check_unitary(const Matrix& u) {
  const double defect = unitarity_defect(u);
  if (!(defect < kUnitarityTolerance)) {
    std::ostringstream msg;
    msg << "one-period propagator not unitary (max |U^dag U - I| = " << defect
        << "); increase numerical.n_big_t";
    throw std::runtime_error(msg.str());
  }
}

// H(T - t) = H(t) and every step matrix is complex symmetric, so the second half of the
// period is the transpose of the first: U(T) = A^T E_mid A with A the first floor(S/2)
// steps. Samples with 2s < n_t are reported to on_sample; the self-mirror sample (n_t
// even) goes to on_mid.
Matrix half_period_propagate(const PeriodicPropagator& prop, int dim,
                             const std::function<void(int, double, const Matrix&)>& on_sample,
                             const std::function<void(double, const Matrix&)>& on_mid) {
  const int total = prop.steps();
  const int half = total / 2;
  const int per = prop.steps_per_sample();
  const int n = prop.samples();
  Matrix a = Matrix::Identity(dim, dim);
  for (int k = 0; k < half; ++k) {
    if (k % per == 0 && on_sample) {
      const int s = k / per;
      if (2 * s < n) on_sample(s, prop.sample_time(s), a);
    }
    prop.step(a, k);
  }
  if (half % per == 0 && 2 * (half / per) == n && on_mid) on_mid(prop.sample_time(half / per), a);
  if (total % 2 == 1) {
    Matrix tail = a;
    prop.step(tail, half);
    return a.transpose() * tail;
  }
  return a.transpose() * a;
}

}  // namespace

PeriodPropagation propagate_period(const TransmonParams& params, const DriveParams& drive,
                                   const NumericalConfig& cfg) {
  PeriodicPropagator prop(params, drive, cfg);
  const int d = params.dim;
  Matrix hu(d, d);
  Matrix first = Matrix::Zero(d, d);
  Matrix mirrored = Matrix::Zero(d, d);
  Matrix mid = Matrix::Zero(d, d);
  const auto on_sample = [&](int s, double t, const Matrix& u) {
    prop.apply_hamiltonian(t, u, hu);
    if (s == 0) {
      first.noalias() += u.adjoint() * hu;
    } else {
      mirrored.noalias() += u.adjoint() * hu;
    }
  };
  const auto on_mid = [&](double t, const Matrix& u) {
    prop.apply_hamiltonian(t, u, hu);
    mid.noalias() += u.adjoint() * hu;
  };
  PeriodPropagation out;
  out.propagator = half_period_propagate(prop, d, on_sample, on_mid);
  check_unitary(out.propagator);
  // Sample n_t - s carries U_T^dag conj(A_s) U_T.
  const Matrix& ut = out.propagator;
  out.averaged_heisenberg_hamiltonian = first + mirrored + mid + ut.adjoint() * (mirrored.conjugate() * ut);
  out.averaged_heisenberg_hamiltonian /= static_cast<double>(prop.samples());
  return out;
}

Matrix one_period_propagator(const TransmonParams& params, const DriveParams& drive, const NumericalConfig& cfg) {
  PeriodicPropagator prop(params, drive, cfg);
  Matrix u = half_period_propagate(prop, params.dim, nullptr, nullptr);
  check_unitary(u);
  return u;
}

double fold_quasienergy(double eps, double omega_d) {
  double folded = std::remainder(eps, omega_d);  // [-w/2, w/2]
  if (folded <= -0.5 * omega_d) folded += omega_d;
  return folded;
}

namespace {

void fix_global_phase(Matrix& modes) {
  for (Eigen::Index c = 0; c < modes.cols(); ++c) {
    Eigen::Index arg = 0;
    modes.col(c).cwiseAbs2().maxCoeff(&arg);
    const Complex z = modes(arg, c);
    if (std::abs(z) > 0.0) modes.col(c) *= std::conj(z) / std::abs(z);
  }
}

double charge_centroid(const Vector& v) {
  const int d = static_cast<int>(v.size());
  double c = 0.0;
  for (int i = 0; i < d; ++i) c += std::norm(v[i]) * charge_of_index(i, d);
  return c;
}

FloquetBasis basis_from_schur(const Matrix& u, const Matrix& avg_h, const TransmonParams& params,
                              const DriveParams& drive) {
  const int d = static_cast<int>(u.rows());
  if (u.cols() != d || d != params.dim) throw std::invalid_argument("propagator has wrong dimension");
  const double defect = unitarity_defect(u);
  if (!(defect < kUnitarityTolerance)) {
    std::ostringstream msg;
    msg << "propagator not unitary to tolerance (defect " << defect << ")";
    throw std::invalid_argument(msg.str());
  }

  // U is normal, so its Schur form is diagonal and the Schur vectors are an orthonormal
  // eigenbasis, including inside degenerate clusters.
  Eigen::ComplexSchur<Matrix> schur(u, true);
  if (schur.info() != Eigen::Success) throw std::runtime_error("Schur decomposition of U failed");
  const Matrix& tri = schur.matrixT();
  double off_diag = 0.0;
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < j; ++i) off_diag = std::max(off_diag, std::abs(tri(i, j)));
  if (off_diag > kSchurTolerance) {
    std::ostringstream msg;
    msg << "ill-conditioned Floquet eigendecomposition: Schur off-diagonal residual " << off_diag;
    throw std::runtime_error(msg.str());
  }

  Matrix modes = schur.matrixU();
  fix_global_phase(modes);
  const double period = drive.period();
  RealVector eps(d), hbar(d);
  double imag_worst = 0.0;
  double scale = drive.omega_d;
  for (int i = 0; i < d; ++i) {
    eps[i] = fold_quasienergy(-std::arg(tri(i, i)) / period, drive.omega_d);
    const Complex h = modes.col(i).dot(avg_h * modes.col(i));
    hbar[i] = h.real();
    imag_worst = std::max(imag_worst, std::abs(h.imag()));
    scale = std::max(scale, std::abs(h.real()));
  }
  if (imag_worst > 1e-6 * scale) {
    std::ostringstream msg;
    msg << "averaged energy has imaginary residual " << imag_worst;
    throw std::runtime_error(msg.str());
  }

  std::vector<int> idx(d);
  std::iota(idx.begin(), idx.end(), 0);
  const int c0 = (d - 1) / 2;
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (hbar[a] != hbar[b]) return hbar[a] < hbar[b];
    const double wa = std::norm(modes(c0, a));
    const double wb = std::norm(modes(c0, b));
    if (wa != wb) return wa > wb;
    return charge_centroid(modes.col(a)) < charge_centroid(modes.col(b));
  });

  FloquetBasis basis;
  basis.omega_d = drive.omega_d;
  basis.modes0.resize(d, d);
  basis.quasienergies.resize(d);
  basis.avg_energy.resize(d);
  basis.order = idx;
  for (int c = 0; c < d; ++c) {
    basis.modes0.col(c) = modes.col(idx[c]);
    basis.quasienergies[c] = eps[idx[c]];
    basis.avg_energy[c] = hbar[idx[c]];
  }
  return basis;
}

}  // namespace

FloquetBasis compute_floquet_basis(const PeriodPropagation& prop, const TransmonParams& params,
                                   const DriveParams& drive, const NumericalConfig&) {
  return basis_from_schur(prop.propagator, prop.averaged_heisenberg_hamiltonian, params, drive);
}

FloquetBasis compute_floquet_basis(const Matrix& u, const TransmonParams& params, const DriveParams& drive,
                                   const NumericalConfig& cfg) {
  const PeriodPropagation pass = propagate_period(params, drive, cfg);
  return basis_from_schur(u, pass.averaged_heisenberg_hamiltonian, params, drive);
}

ModeTable mode_table(const FloquetBasis& basis, const TransmonParams& params, const DriveParams& drive,
                     const NumericalConfig& cfg, std::vector<int> columns) {
  if (basis.dim() != params.dim) throw std::invalid_argument("basis does not match transmon dimension");
  if (columns.empty()) {
    columns.resize(basis.dim());
    std::iota(columns.begin(), columns.end(), 0);
  }
  PeriodicPropagator prop(params, drive, cfg);
  const auto ncols = static_cast<Eigen::Index>(columns.size());
  Matrix block(params.dim, ncols);
  RealVector eps(ncols);
  for (Eigen::Index c = 0; c < ncols; ++c) {
    block.col(c) = basis.modes0.col(columns[c]);
    eps[c] = basis.quasienergies[columns[c]];
  }
  const Matrix start = block;

  ModeTable table;
  table.columns = columns;
  table.period = prop.period();
  table.samples.reserve(prop.samples());
  table.times.reserve(prop.samples());
  prop.propagate(block, [&](int, double t, const Matrix& b) {
    Matrix snap = b;
    for (Eigen::Index c = 0; c < ncols; ++c) snap.col(c) *= std::polar(1.0, eps[c] * t);
    table.samples.push_back(std::move(snap));
    table.times.push_back(t);
  });

  double worst_norm = 0.0;
  double fidelity = 1.0;
  for (Eigen::Index c = 0; c < ncols; ++c) {
    const Vector end = block.col(c) * std::polar(1.0, eps[c] * table.period);
    worst_norm = std::max(worst_norm, std::abs(end.norm() - 1.0));
    fidelity = std::min(fidelity, std::norm(start.col(c).dot(end)));
  }
  if (worst_norm > kClosureTolerance) {
    std::ostringstream msg;
    msg << "mode propagation lost unitarity (norm drift " << worst_norm << ")";
    throw std::runtime_error(msg.str());
  }
  table.closure_fidelity = fidelity;
  return table;
}

RealVector averaged_energy(const FloquetBasis& basis, const ModeTable& table, const TransmonParams& params,
                           const DriveParams& drive) {
  if (table.samples.empty()) throw std::invalid_argument("empty mode table");
  const auto ncols = static_cast<Eigen::Index>(table.columns.size());
  NumericalConfig cfg;
  cfg.dim = params.dim;
  cfg.n_t = static_cast<int>(table.samples.size());
  cfg.n_big_t = cfg.n_t + 1;
  PeriodicPropagator prop(params, drive, cfg);
  RealVector out = RealVector::Zero(ncols);
  RealVector imag = RealVector::Zero(ncols);
  Matrix hx;
  for (std::size_t s = 0; s < table.samples.size(); ++s) {
    prop.apply_hamiltonian(table.times[s], table.samples[s], hx);
    for (Eigen::Index c = 0; c < ncols; ++c) {
      const Complex v = table.samples[s].col(c).dot(hx.col(c));
      out[c] += v.real();
      imag[c] += v.imag();
    }
  }
  out /= static_cast<double>(table.samples.size());
  imag /= static_cast<double>(table.samples.size());
  const double scale = std::max(basis.omega_d, out.cwiseAbs().maxCoeff());
  if (imag.cwiseAbs().maxCoeff() > 1e-6 * scale) {
    throw std::runtime_error("averaged energy has a non-negligible imaginary part");
  }
  return out;
}

ChaoticClassification classify_chaotic(const FloquetBasis& basis, const StaticSpectrum& eigenbasis,
                                       double threshold) {
  const int d = basis.dim();
  if (eigenbasis.states.rows() != d) throw std::invalid_argument("eigenbasis dimension mismatch");
  const Matrix proj = eigenbasis.states.cast<Complex>().transpose() * basis.modes0;  // (j, i) = <j|phi_i>
  ChaoticClassification out;
  out.threshold = threshold;
  out.overlaps = proj.cwiseAbs2().transpose();
  out.labels.resize(d);
  for (int i = 0; i < d; ++i) {
    const bool regular = out.overlaps.row(i).maxCoeff() >= threshold;
    out.labels[i] = regular ? ModeLabel::Regular : ModeLabel::Chaotic;
    if (!regular) ++out.n_ch;
  }
  return out;
}

int connected_mode(const ChaoticClassification& chaos, int j) {
  Eigen::Index best = 0;
  chaos.overlaps.col(j).maxCoeff(&best);
  return static_cast<int>(best);
}

}  // namespace floquet_loss
