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

#include "floquet_loss/dissipation.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace floquet_loss {

std::string_view to_string(Mechanism m) {
  switch (m) {
    case Mechanism::Rad:
      return "rad";
    case Mechanism::Diel:
      return "diel";
    case Mechanism::Qpg:
      return "qpg";
  }
  return "?";
}

Mechanism mechanism_from_string(std::string_view name) {
  if (name == "rad") return Mechanism::Rad;
  if (name == "diel") return Mechanism::Diel;
  if (name == "qpg") return Mechanism::Qpg;
  throw std::invalid_argument("unknown mechanism '" + std::string(name) + "' (expected rad, diel or qpg)");
}

std::vector<OperatorKind> coupling_kinds(Mechanism m) {
  switch (m) {
    case Mechanism::Rad:
      return {OperatorKind::Number};
    case Mechanism::Diel:
      return {OperatorKind::Phase};
    case Mechanism::Qpg:
      return {OperatorKind::SinHalfPhase, OperatorKind::CosHalfPhase};
  }
  return {};
}

namespace {

constexpr double kSymmetryTolerance = 1e-14;
constexpr double kRealModeTolerance = 1e-10;

// Structure of an operator that fixes how stored samples extend to the rest of the data:
// hermitian = +1 (A^dag = A), -1 (A^dag = -A) or 0; conjugation = +1 (real), -1 (imaginary) or 0.
struct OperatorSymmetry {
  int hermitian = 0;
  int conjugation = 0;
};

OperatorSymmetry symmetry_of(const Matrix& a) {
  OperatorSymmetry sym;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() <= kSymmetryTolerance * scale) {
    sym.hermitian = 1;
  } else if ((a + a.adjoint()).cwiseAbs().maxCoeff() <= kSymmetryTolerance * scale) {
    sym.hermitian = -1;
  }
  if (a.imag().cwiseAbs().maxCoeff() == 0.0) {
    sym.conjugation = 1;
  } else if (a.real().cwiseAbs().maxCoeff() == 0.0) {
    sym.conjugation = -1;
  }
  return sym;
}

ChargeOperator operator_for(OperatorKind kind, const TransmonParams& params) {
  if (kind == OperatorKind::StaticHamiltonian) return build_static_hamiltonian(params);
  return build_coupling_operator(kind, params.dim);
}

// Planner calls are not thread-safe in FFTW; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(int n) : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

class ForwardTransform {
 public:
  explicit ForwardTransform(int n) : n_(n), in_(n), out_(n) {
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_1d(n, in_.data, out_.data, FFTW_FORWARD, FFTW_ESTIMATE);
    if (plan_ == nullptr) throw std::runtime_error("FFTW planning failed");
  }
  ~ForwardTransform() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  ForwardTransform(const ForwardTransform&) = delete;
  ForwardTransform& operator=(const ForwardTransform&) = delete;

  Complex* input() { return reinterpret_cast<Complex*>(in_.data); }
  const Complex* output() const { return reinterpret_cast<const Complex*>(out_.data); }
  void run() { fftw_execute(plan_); }
  int size() const { return n_; }

 private:
  int n_;
  FftwBuffer in_;
  FftwBuffer out_;
  fftw_plan plan_ = nullptr;
};

void check_alias_free(int k_max, int n_t) {
  if (k_max < 0 || 2 * k_max + 1 > n_t) {
    std::ostringstream msg;
    msg << "k_max=" << k_max << " aliases on " << n_t << " samples per period (need k_max <= (n_t-1)/2)";
    throw std::invalid_argument(msg.str());
  }
}

// Per-pair sample series for one operator. Pairs are (i <= j) when the operator is
// (anti-)Hermitian, all (i, j) otherwise. Only samples 0..stored-1 are kept; the rest follow
// from M_{n_t - s} = conjugation * conj(M_s) when `mirrored`.
class SampleStore {
 public:
  SampleStore(int n, int stored, OperatorSymmetry sym) : n_(n), stored_(stored), sym_(sym) {
    pairs_ = sym.hermitian != 0 ? static_cast<std::size_t>(n) * (n + 1) / 2
                                : static_cast<std::size_t>(n) * n;
    data_.assign(pairs_ * static_cast<std::size_t>(stored), Complex(0.0, 0.0));
  }

  void record(int s, const Matrix& m) {
    std::size_t p = 0;
    for (int i = 0; i < n_; ++i)
      for (int j = sym_.hermitian != 0 ? i : 0; j < n_; ++j, ++p) data_[p * stored_ + s] = m(i, j);
  }

  TransitionTensor transform(OperatorKind kind, int n_t, int k_max, bool mirrored) const {
    TransitionTensor t;
    t.kind = kind;
    t.n = n_;
    t.k_max = k_max;
    t.elements.assign(static_cast<std::size_t>(n_) * n_ * t.harmonics(), Complex(0.0, 0.0));
    ForwardTransform fft(n_t);
    Complex* in = fft.input();
    const Complex* out = fft.output();
    const double norm = 1.0 / static_cast<double>(n_t);
    const double rho = static_cast<double>(sym_.conjugation);
    const double h = static_cast<double>(sym_.hermitian);
    std::size_t p = 0;
    for (int i = 0; i < n_; ++i) {
      for (int j = sym_.hermitian != 0 ? i : 0; j < n_; ++j, ++p) {
        const Complex* series = data_.data() + p * stored_;
        for (int s = 0; s < stored_; ++s) in[s] = series[s];
        if (mirrored)
          for (int s = stored_; s < n_t; ++s) in[s] = rho * std::conj(series[n_t - s]);
        fft.run();
        for (int k = -k_max; k <= k_max; ++k) {
          const Complex v = out[(k + n_t) % n_t] * norm;
          t.elements[t.index(i, j, k)] = v;
          if (sym_.hermitian != 0 && i != j) t.elements[t.index(j, i, -k)] = h * std::conj(v);
        }
      }
    }
    return t;
  }

 private:
  int n_;
  int stored_;
  OperatorSymmetry sym_;
  std::size_t pairs_ = 0;
  std::vector<Complex> data_;
};

void apply_operator(const ChargeOperator& op, bool diagonal, const Matrix& x, Matrix& y) {
  if (diagonal) {
    y = op.matrix.diagonal().asDiagonal() * x;
  } else {
    y.noalias() = op.matrix * x;
  }
}

bool is_diagonal(const Matrix& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j && a(i, j) != Complex(0.0, 0.0)) return false;
  return true;
}

}  // namespace

TransitionTensor fourier_components(const ModeTable& table, const ChargeOperator& op, int k_max) {
  const int n_t = static_cast<int>(table.samples.size());
  if (n_t == 0) throw std::invalid_argument("empty mode table");
  check_alias_free(k_max, n_t);
  const int d = static_cast<int>(table.samples.front().rows());
  if (op.matrix.rows() != d || op.matrix.cols() != d)
    throw std::invalid_argument("operator dimension does not match the mode table");
  const int n = static_cast<int>(table.samples.front().cols());
  const OperatorSymmetry sym = symmetry_of(op.matrix);
  const bool diagonal = is_diagonal(op.matrix);
  SampleStore store(n, n_t, sym);
  Matrix applied(d, n);
  Matrix m(n, n);
  for (int s = 0; s < n_t; ++s) {
    apply_operator(op, diagonal, table.samples[s], applied);
    m.noalias() = table.samples[s].adjoint() * applied;
    store.record(s, m);
  }
  return store.transform(op.kind, n_t, k_max, false);
}

StreamedTensors stream_fourier_components(const FloquetBasis& basis, const TransmonParams& params,
                                          const DriveParams& drive, const NumericalConfig& cfg, int n,
                                          const std::vector<OperatorKind>& kinds) {
  cfg.validate();
  const int d = params.dim;
  if (basis.dim() != d || cfg.dim != d) throw std::invalid_argument("basis, params and config disagree on dim");
  if (n < 1 || n > d) throw std::invalid_argument("active mode count out of range");
  check_alias_free(cfg.k_max, cfg.n_t);

  std::vector<ChargeOperator> ops;
  std::vector<OperatorSymmetry> syms;
  std::vector<bool> diagonal;
  for (OperatorKind kind : kinds) {
    ops.push_back(operator_for(kind, params));
    syms.push_back(symmetry_of(ops.back().matrix));
    diagonal.push_back(is_diagonal(ops.back().matrix));
  }

  const Matrix phi0 = basis.modes0.leftCols(n);
  bool mirrored = phi0.imag().cwiseAbs().maxCoeff() <= kRealModeTolerance;
  for (const auto& sym : syms) mirrored = mirrored && sym.conjugation != 0;

  const int n_t = cfg.n_t;
  const int last = mirrored ? n_t / 2 : n_t - 1;
  std::vector<SampleStore> stores;
  for (const auto& sym : syms) stores.emplace_back(n, last + 1, sym);

  PeriodicPropagator prop(params, drive, cfg);
  const int per = prop.steps_per_sample();
  Matrix block = phi0;
  Matrix phased(d, n);
  Matrix applied(d, n);
  Matrix m(n, n);
  StreamedTensors result;
  result.used_time_reversal = mirrored;
  for (int s = 0; s <= last; ++s) {
    const double t = prop.sample_time(s);
    for (int c = 0; c < n; ++c) phased.col(c) = block.col(c) * std::polar(1.0, basis.quasienergies[c] * t);
    result.edge_population = std::max(result.edge_population, edge_population(phased));
    for (std::size_t o = 0; o < ops.size(); ++o) {
      apply_operator(ops[o], diagonal[o], phased, applied);
      m.noalias() = phased.adjoint() * applied;
      stores[o].record(s, m);
    }
    if (s < last)
      for (int j = 0; j < per; ++j) prop.step(block, s * per + j);
  }
  for (std::size_t o = 0; o < ops.size(); ++o)
    result.tensors.push_back(stores[o].transform(kinds[o], n_t, cfg.k_max, mirrored));
  return result;
}

std::vector<Mechanism> BathSet::mechanisms() const {
  std::vector<Mechanism> out;
  if (rad) out.push_back(Mechanism::Rad);
  if (diel) out.push_back(Mechanism::Diel);
  if (qpg) out.push_back(Mechanism::Qpg);
  return out;
}

void BathSet::validate() const {
  if (!rad && !diel && !qpg) throw std::invalid_argument("no dissipation mechanism selected");
  if (rad) rad->validate();
  if (diel) diel->validate();
  if (qpg) qpg->validate();
}

std::size_t RateTensor::nonzero_count() const {
  return static_cast<std::size_t>(std::count_if(rates.begin(), rates.end(), [](double r) { return r != 0.0; }));
}

RateTensor transition_rates(Mechanism mechanism, const std::vector<const TransitionTensor*>& tensors,
                            const RealVector& quasienergies, const BathSet& baths, double omega_d,
                            PairBreakingCache* cache) {
  const std::vector<OperatorKind> kinds = coupling_kinds(mechanism);
  if (tensors.size() != kinds.size()) throw std::invalid_argument("wrong number of tensors for mechanism");
  for (std::size_t t = 0; t < tensors.size(); ++t) {
    if (tensors[t] == nullptr || tensors[t]->kind != kinds[t])
      throw std::invalid_argument("tensor kind does not match mechanism " + std::string(to_string(mechanism)));
    if (tensors[t]->n != tensors[0]->n || tensors[t]->k_max != tensors[0]->k_max)
      throw std::invalid_argument("tensor shapes differ");
  }
  const TransitionTensor& first = *tensors[0];
  if (quasienergies.size() < first.n) throw std::invalid_argument("too few quasienergies for tensor");
  if (!(omega_d > 0.0)) throw std::invalid_argument("omega_d must be positive");

  RateTensor out;
  out.mechanism = mechanism;
  out.n = first.n;
  out.k_max = first.k_max;
  out.quasienergies = quasienergies.head(first.n);
  out.omega_d = omega_d;
  out.rates.assign(first.elements.size(), 0.0);

  switch (mechanism) {
    case Mechanism::Rad: {
      if (!baths.rad) throw std::invalid_argument("radiative bath missing");
      for (int i = 0; i < out.n; ++i)
        for (int j = 0; j < out.n; ++j)
          for (int k = -out.k_max; k <= out.k_max; ++k) {
            const double delta = out.delta(i, j, k);
            if (std::abs(delta) > kRadiativeBandLimit) continue;
            const std::size_t idx = out.index(i, j, k);
            out.rates[idx] = j_rad(delta, *baths.rad) * std::norm(first.elements[idx]);
          }
      break;
    }
    case Mechanism::Diel: {
      if (!baths.diel) throw std::invalid_argument("dielectric bath missing");
      for (int i = 0; i < out.n; ++i)
        for (int j = 0; j < out.n; ++j)
          for (int k = -out.k_max; k <= out.k_max; ++k) {
            const std::size_t idx = out.index(i, j, k);
            out.rates[idx] = j_diel(out.delta(i, j, k), *baths.diel) * std::norm(first.elements[idx]);
          }
      break;
    }
    case Mechanism::Qpg: {
      if (!baths.qpg) throw std::invalid_argument("qpg bath missing");
      if (cache != nullptr && cache->delta_al() != baths.qpg->delta_al)
        throw std::invalid_argument("pair-breaking cache built for a different gap");
      const TransitionTensor& cosine = *tensors[1];
      for (int i = 0; i < out.n; ++i)
        for (int j = 0; j < out.n; ++j)
          for (int k = -out.k_max; k <= out.k_max; ++k) {
            const double delta = out.delta(i, j, k);
            if (!(delta >= 2.0 * baths.qpg->delta_al)) continue;
            const auto [jp, jm] =
                cache != nullptr ? j_qpg_pair(delta, *baths.qpg, *cache) : j_qpg_pair(delta, *baths.qpg);
            const std::size_t idx = out.index(i, j, k);
            out.rates[idx] = jp * std::norm(first.elements[idx]) + jm * std::norm(cosine.elements[idx]);
          }
      break;
    }
  }
  return out;
}

void prune_rates(std::vector<RateTensor>& tensors) {
  double peak = 0.0;
  for (const auto& t : tensors)
    for (double r : t.rates) peak = std::max(peak, r);
  const double floor = kRatePruneRelative * peak;
  for (auto& t : tensors)
    for (double& r : t.rates)
      if (r < floor) r = 0.0;
}

RealMatrix total_rate_matrix(const std::vector<RateTensor>& tensors) {
  if (tensors.empty()) throw std::invalid_argument("no rate tensors");
  const int n = tensors.front().n;
  const int k_max = tensors.front().k_max;
  for (const auto& t : tensors)
    if (t.n != n || t.k_max != k_max) throw std::invalid_argument("rate tensors have mismatched dimensions");
  RealMatrix gamma = RealMatrix::Zero(n, n);
  for (const auto& t : tensors)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double* row = t.rates.data() + t.index(i, j, -k_max);
        double s = 0.0;
        for (int k = 0; k < t.harmonics(); ++k) s += row[k];
        gamma(i, j) += s;
      }
  return gamma;
}

namespace {

// Strongly connected components of the graph i -> j for gamma(i, j) > 0, i != j.
std::vector<int> strong_components(const RealMatrix& gamma, int& count) {
  const int n = static_cast<int>(gamma.rows());
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1), stack;
  std::vector<bool> on_stack(n, false);
  int next = 0;
  count = 0;
  struct Frame {
    int v;
    int child;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = next++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      bool descended = false;
      while (f.child < n) {
        const int w = f.child++;
        if (w == f.v || !(gamma(f.v, w) > 0.0)) continue;
        if (index[w] < 0) {
          index[w] = low[w] = next++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[w]) low[f.v] = std::min(low[f.v], index[w]);
      }
      if (descended) continue;
      const int v = f.v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      if (low[v] == index[v]) {
        int w = -1;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = count;
        } while (w != v);
        ++count;
      }
    }
  }
  return comp;
}

}  // namespace

SteadyState steady_state(const RealMatrix& gamma, int n_ch) {
  const int n = static_cast<int>(gamma.rows());
  if (n == 0 || gamma.cols() != n) throw std::invalid_argument("rate matrix must be square and nonempty");
  if ((gamma.array() < 0.0).any() || !gamma.allFinite())
    throw std::invalid_argument("rate matrix must be finite and nonnegative");

  int count = 0;
  const std::vector<int> comp = strong_components(gamma, count);
  std::vector<bool> closed(count, true);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && gamma(i, j) > 0.0 && comp[i] != comp[j]) closed[comp[i]] = false;
  std::vector<int> closed_ids;
  for (int c = 0; c < count; ++c)
    if (closed[c]) closed_ids.push_back(c);
  if (closed_ids.size() != 1) {
    std::ostringstream msg;
    msg << "steady state is not unique: " << closed_ids.size() << " closed classes";
    for (int c : closed_ids) {
      msg << " {";
      bool first = true;
      for (int i = 0; i < n; ++i)
        if (comp[i] == c) {
          msg << (first ? "" : ",") << i;
          first = false;
        }
      msg << "}";
    }
    throw std::runtime_error(msg.str());
  }

  std::vector<int> members;
  for (int i = 0; i < n; ++i)
    if (comp[i] == closed_ids.front()) members.push_back(i);
  const int m = static_cast<int>(members.size());
  RealVector p = RealVector::Zero(n);
  if (m == 1) {
    p[members.front()] = 1.0;
  } else {
    double scale = 0.0;
    for (int a : members)
      for (int b : members) scale = std::max(scale, gamma(a, b));
    // Generator rows j, columns i: L[j][i] = Gamma_ij, L[i][i] = -sum_j Gamma_ij; the last
    // row enforces sum p = 1.
    RealMatrix l = RealMatrix::Zero(m + 1, m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        if (a == b) continue;
        const double g = gamma(members[a], members[b]) / scale;
        l(b, a) += g;
        l(a, a) -= g;
      }
    l.row(m).setOnes();
    RealVector rhs = RealVector::Zero(m + 1);
    rhs[m] = 1.0;
    Eigen::ColPivHouseholderQR<RealMatrix> qr(l);
    if (qr.rank() < m) throw std::runtime_error("rate generator is rank deficient on its closed class");
    const RealVector sub = qr.solve(rhs);
    for (int a = 0; a < m; ++a) p[members[a]] = sub[a];
  }
  if (p.minCoeff() < -1e-10) {
    std::ostringstream msg;
    msg << "steady state has negative population " << p.minCoeff();
    throw std::runtime_error(msg.str());
  }
  p = p.cwiseMax(0.0);
  p /= p.sum();

  SteadyState out;
  out.stationary = p;
  if (n_ch >= 0 && n_ch < n - 1) {
    RealVector kept = p;
    kept.tail(n - 1 - n_ch).setZero();
    const double mass = kept.sum();
    if (mass > 0.0) {
      p = kept / mass;
    } else {
      out.warnings.push_back("all steady-state weight lies above the chaotic-layer index; exclusion skipped");
    }
  }
  out.populations = p;
  return out;
}

double balance_residual(const RealMatrix& gamma, const RealVector& p) {
  const int n = static_cast<int>(gamma.rows());
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    double in = 0.0;
    double out = 0.0;
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      in += p[i] * gamma(i, j);
      out += p[j] * gamma(j, i);
    }
    worst = std::max(worst, std::abs(in - out));
  }
  return worst;
}

RealVector relax_populations(const RealMatrix& gamma, double tol, long max_steps) {
  const int n = static_cast<int>(gamma.rows());
  RealMatrix l = RealMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) {
        l(j, i) += gamma(i, j);
        l(i, i) -= gamma(i, j);
      }
  const double max_out = (-l.diagonal()).maxCoeff();
  RealVector p = RealVector::Constant(n, 1.0 / n);
  if (!(max_out > 0.0)) return p;
  const double dt = 0.5 / max_out;
  RealVector dp(n);
  for (long step = 0; step < max_steps; ++step) {
    dp.noalias() = l * p;
    if (dp.lpNorm<1>() < tol * max_out) return p;
    p += dt * dp;
  }
  throw std::runtime_error("population relaxation did not converge");
}

namespace {

// Neumaier-compensated running sum; the order of additions is fixed by the caller.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

}  // namespace

LossReport loss_rate(const RealVector& p, const std::vector<RateTensor>& tensors) {
  LossReport report;
  report.populations = p;
  if (tensors.empty()) return report;
  const int n = tensors.front().n;
  if (p.size() != n) throw std::invalid_argument("population vector does not match rate tensors");
  report.omega_d = tensors.front().omega_d;
  CompensatedSum total;
  for (const auto& t : tensors) {
    if (t.n != n) throw std::invalid_argument("rate tensors have mismatched dimensions");
    CompensatedSum part;
    for (int i = 0; i < n; ++i) {
      if (p[i] == 0.0) continue;
      CompensatedSum row;
      for (int j = 0; j < n; ++j)
        for (int k = -t.k_max; k <= t.k_max; ++k) {
          const double r = t.rates[t.index(i, j, k)];
          if (r != 0.0) row.add(r * t.delta(i, j, k));
        }
      part.add(p[i] * row.value());
    }
    const double watts = units::hbar * part.value();
    report.loss_by_mechanism[t.mechanism] += watts;
  }
  for (const auto& [mech, watts] : report.loss_by_mechanism) total.add(watts);
  report.loss_total = total.value();
  report.loss_photons = report.loss_total / (units::hbar * report.omega_d);
  return report;
}

const TransitionTensor& FloquetPoint::tensor(OperatorKind kind) const {
  for (std::size_t i = 0; i < kinds.size(); ++i)
    if (kinds[i] == kind) return tensors[i];
  throw std::invalid_argument("no transition tensor for operator " + std::string(to_string(kind)));
}

int default_active_modes(int n_ch, int dim) { return std::min(dim, std::max(2 * n_ch, 60)); }

FloquetPoint solve_floquet_point(const TransmonParams& params, const DriveParams& drive, const NumericalConfig& cfg,
                                 const std::vector<Mechanism>& mechanisms, const PipelineOptions& options) {
  params.validate();
  drive.validate();
  cfg.validate();
  if (cfg.dim != params.dim) throw std::invalid_argument("numerical dim and transmon dim differ");

  FloquetPoint point;
  point.params = params;
  point.drive = drive;
  point.cfg = cfg;
  const PeriodPropagation period = propagate_period(params, drive, cfg);
  point.basis = compute_floquet_basis(period, params, drive, cfg);
  point.chaos = classify_chaotic(point.basis, static_spectrum(params));
  point.n_active = options.n_active > 0 ? std::min(options.n_active, params.dim)
                                        : default_active_modes(point.chaos.n_ch, params.dim);
  for (Mechanism m : mechanisms)
    for (OperatorKind k : coupling_kinds(m))
      if (std::find(point.kinds.begin(), point.kinds.end(), k) == point.kinds.end()) point.kinds.push_back(k);
  point.warnings = point.basis.warnings;
  if (!point.kinds.empty()) {
    StreamedTensors streamed = stream_fourier_components(point.basis, params, drive, cfg, point.n_active, point.kinds);
    point.tensors = std::move(streamed.tensors);
    if (streamed.edge_population >= options.truncation_tolerance) {
      std::ostringstream msg;
      msg << "charge-basis truncation: active modes carry " << streamed.edge_population
          << " population on the outermost charge states; increase dim";
      point.warnings.push_back(msg.str());
    }
  }
  return point;
}

PointEvaluation evaluate_point(const FloquetPoint& point, const BathSet& baths, PairBreakingCache* cache) {
  baths.validate();
  PointEvaluation ev;
  for (Mechanism m : baths.mechanisms()) {
    std::vector<const TransitionTensor*> ts;
    for (OperatorKind k : coupling_kinds(m)) ts.push_back(&point.tensor(k));
    ev.rates.push_back(transition_rates(m, ts, point.basis.quasienergies, baths, point.drive.omega_d, cache));
  }
  prune_rates(ev.rates);
  ev.gamma = total_rate_matrix(ev.rates);
  const int exclusion = std::min(point.chaos.n_ch, point.n_active - 1);
  SteadyState ss = steady_state(ev.gamma, exclusion);
  ev.report = loss_rate(ss.populations, ev.rates);
  ev.report.n_ch = point.chaos.n_ch;
  ev.report.n_ch_used = exclusion;
  ev.report.n_active = point.n_active;
  ev.report.warnings = point.warnings;
  ev.report.warnings.insert(ev.report.warnings.end(), ss.warnings.begin(), ss.warnings.end());
  return ev;
}

LossReport simulate_point(const TransmonParams& params, const DriveParams& drive, const NumericalConfig& cfg,
                          const BathSet& baths, const PipelineOptions& options) {
  baths.validate();
  const FloquetPoint point = solve_floquet_point(params, drive, cfg, baths.mechanisms(), options);
  return evaluate_point(point, baths).report;
}

LossReport mean_loss(const LossReport& a, const LossReport& b) {
  LossReport out = a;
  out.loss_photons = 0.5 * (a.loss_photons + b.loss_photons);
  for (const auto& [mech, watts] : b.loss_by_mechanism) out.loss_by_mechanism.try_emplace(mech, 0.0);
  CompensatedSum total;
  for (auto& [mech, watts] : out.loss_by_mechanism) {
    const auto ia = a.loss_by_mechanism.find(mech);
    const auto ib = b.loss_by_mechanism.find(mech);
    watts = 0.5 * ((ia != a.loss_by_mechanism.end() ? ia->second : 0.0) +
                   (ib != b.loss_by_mechanism.end() ? ib->second : 0.0));
    total.add(watts);
  }
  out.loss_total = total.value();
  out.loss_photons = out.omega_d > 0.0 ? out.loss_total / (units::hbar * out.omega_d) : out.loss_photons;
  out.warnings.insert(out.warnings.end(), b.warnings.begin(), b.warnings.end());
  return out;
}

LossReport parity_averaged_loss(const TransmonParams& params, const DriveParams& drive, const NumericalConfig& cfg,
                                const BathSet& baths, double n_g_static, const PipelineOptions& options) {
  TransmonParams low = params;
  TransmonParams high = params;
  low.n_g = n_g_static - 0.25;
  high.n_g = n_g_static + 0.25;
  return mean_loss(simulate_point(low, drive, cfg, baths, options), simulate_point(high, drive, cfg, baths, options));
}

}  // namespace floquet_loss
