// Copyright 2026 The nufloquet Authors
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

#include "nufloquet/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "nufloquet/error.hpp"

namespace nufloquet {

Matrix w_map(int L) {
  Matrix w = Matrix::Zero(2 * L, 2 * L);
  for (int j = 0; j < L; ++j) {
    w(majorana::b(j), j) = kI;
    w(majorana::b(j), L + j) = -kI;
    w(majorana::a(j), j) = 1.0;
    w(majorana::a(j), L + j) = 1.0;
  }
  return w;
}

CorrelationState::CorrelationState(Matrix u, std::int64_t step) : step_(step) {
  const Eigen::Index L = u.cols();
  if (u.rows() != 2 * L || L == 0) throw ConfigError("InvalidParams", "isometry must be 2L x L");
  const Eigen::ColPivHouseholderQR<Matrix> qr(u);
  const auto diag = qr.matrixR().diagonal().cwiseAbs();
  const double top = diag.maxCoeff();
  const double low = diag.minCoeff();
  if (!(top > 0.0) || low < 1e-13 * top) {
    std::ostringstream msg;
    msg << "annihilator columns lost rank: pivot ratio " << (top > 0.0 ? low / top : 0.0);
    throw NumericalError("RankCollapse", msg.str());
  }
  u_ = qr.householderQ() * Matrix::Identity(2 * L, L);
  c_ = u_ * u_.adjoint();
}

CorrelationState CorrelationState::from_correlation(const Matrix& cc, std::int64_t step) {
  const Eigen::Index n = cc.rows();
  const Matrix herm = 0.5 * (cc + cc.adjoint());
  const Eigen::SelfAdjointEigenSolver<Matrix> es(herm);
  // Eigenvalues ascend; the occupied half sits at the top.
  return CorrelationState(es.eigenvectors().rightCols(n / 2), step);
}

Matrix CorrelationState::majorana_correlation() const {
  const Matrix w = w_map(L());
  return w * c_ * w.adjoint();
}

CorrelationState initial_fock_state(const std::vector<bool>& occupied) {
  const int L = static_cast<int>(occupied.size());
  if (L == 0) throw ConfigError("InvalidParams", "empty occupation list");
  Matrix u = Matrix::Zero(2 * L, L);
  for (int j = 0; j < L; ++j) u(occupied[j] ? L + j : j, j) = 1.0;
  return CorrelationState(u);
}

int fock_parity(const std::vector<bool>& occupied) {
  int parity = 1;
  for (bool n : occupied)
    if (!n) parity = -parity;
  return parity;
}

Propagator::Propagator(const FloquetMatrix& v) {
  const Matrix w = w_map(v.L());
  map_ = 0.5 * w.adjoint() * v.m.conjugate() * w;
}

namespace {

// Above this |U^T S U| the occupied subspace is projected back onto the
// particle-hole symmetric manifold. Roundoff off the manifold is amplified by
// the non-unitary map during transients.
constexpr double kParticleHoleRepair = 1e-11;

double isotropy_defect(const Matrix& u) {
  const Eigen::Index L = u.cols();
  Matrix su(2 * L, L);
  su.topRows(L) = u.bottomRows(L);
  su.bottomRows(L) = u.topRows(L);
  return (u.transpose() * su).cwiseAbs().maxCoeff();
}

CorrelationState restore_particle_hole(const CorrelationState& state) {
  const int L = state.L();
  const Matrix& c = state.correlation();
  Matrix mirrored(2 * L, 2 * L);
  const Matrix cc = c.conjugate();
  mirrored.topLeftCorner(L, L) = cc.bottomRightCorner(L, L);
  mirrored.topRightCorner(L, L) = cc.bottomLeftCorner(L, L);
  mirrored.bottomLeftCorner(L, L) = cc.topRightCorner(L, L);
  mirrored.bottomRightCorner(L, L) = cc.topLeftCorner(L, L);
  const Matrix sym = 0.5 * (c + Matrix::Identity(2 * L, 2 * L) - mirrored);
  return CorrelationState::from_correlation(sym, state.step());
}

}  // namespace

CorrelationState step(const CorrelationState& state, const Propagator& prop) {
  CorrelationState next(prop.map() * state.isometry(), state.step() + 1);
  if (isotropy_defect(next.isometry()) > kParticleHoleRepair) next = restore_particle_hole(next);
  return next;
}

CorrelationState step(const CorrelationState& state, const FloquetMatrix& v) { return step(state, Propagator(v)); }

Evolution::Evolution(ModelParams p) : params_(std::move(p)) {
  time_dependent_ = params_.disorder.kind == DisorderKind::Stochastic;
  if (!time_dependent_) fixed_.emplace(build_floquet_matrix(params_, 0));
}

CorrelationState Evolution::advance(const CorrelationState& state) const {
  if (fixed_) return step(state, *fixed_);
  return step(state, Propagator(build_floquet_matrix(params_, state.step())));
}

ConvergedRun evolve_until_converged(const CorrelationState& start, const Propagator& prop,
                                    const ConvergenceOptions& opt) {
  ConvergedRun run;
  run.state = start;
  // Compare with two periods back so that period-2 oscillations also settle.
  Matrix two_back = start.correlation();
  Matrix one_back;
  int streak = 0;
  for (std::int64_t t = 1; t <= opt.max_steps; ++t) {
    run.state = step(run.state, prop);
    run.steps = t;
    if (t >= 2) {
      run.last_change = (run.state.correlation() - two_back).norm();
      streak = run.last_change < opt.tol ? streak + 1 : 0;
      if (streak >= opt.consecutive) {
        run.converged = true;
        return run;
      }
      two_back = one_back;
    }
    one_back = run.state.correlation();
  }
  return run;
}

namespace {

// Builds the state filling, for every pair, the representative or (when
// flipped) its partner.
CorrelationState fill_modes(const QuasiSpectrum& s, const std::vector<char>& flip) {
  if (s.right.size() == 0) throw ConfigError("InvalidParams", "steady state needs eigenvectors");
  const int L = s.L;
  const Matrix w = w_map(L);
  Matrix u(2 * L, L);
  for (int k = 0; k < L; ++k) {
    const int idx = flip[k] ? s.minus[k] : s.plus[k];
    u.col(k) = w.adjoint() * s.right.col(idx).conjugate();
  }
  CorrelationState st(u);
  if (isotropy_defect(st.isometry()) > kParticleHoleRepair) st = restore_particle_hole(st);
  return st;
}

int sign_of_parity(const CorrelationState& st) {
  return parity_expectation(st.majorana_correlation()).real() >= 0 ? 1 : -1;
}

}  // namespace

CorrelationState steady_state(const QuasiSpectrum& s, const std::vector<int>& i0_choice) {
  std::vector<char> flip(s.L, 0);
  std::size_t used = 0;
  for (int k = 0; k < s.L; ++k) {
    if (!s.mid_gap[k]) continue;
    if (used >= i0_choice.size()) {
      std::ostringstream msg;
      msg << "pair " << k << " has |Im eps| = " << std::abs(s.eps[k].imag()) << "; choose its occupation";
      throw NumericalError("DegenerateImaginaryPart", msg.str());
    }
    flip[k] = i0_choice[used++] != 0;
  }
  return fill_modes(s, flip);
}

std::vector<CorrelationState> steady_states(const QuasiSpectrum& s) {
  int mids = 0;
  for (char m : s.mid_gap) mids += m ? 1 : 0;
  if (mids > 4) throw NumericalError("DegenerateImaginaryPart", "more than four mid-gap pairs");
  std::vector<CorrelationState> out;
  for (int mask = 0; mask < (1 << mids); ++mask) {
    std::vector<int> choice(mids);
    for (int b = 0; b < mids; ++b) choice[b] = (mask >> b) & 1;
    out.push_back(steady_state(s, choice));
  }
  return out;
}

CorrelationState steady_state_in_sector(const QuasiSpectrum& s, int parity) {
  if (parity != 1 && parity != -1) throw ConfigError("InvalidParams", "parity must be +1 or -1");
  std::vector<char> flip(s.L, 0);
  CorrelationState st = fill_modes(s, flip);
  if (sign_of_parity(st) == parity) return st;
  int weakest = 0;
  for (int k = 1; k < s.L; ++k)
    if (std::abs(s.eps[k].imag()) < std::abs(s.eps[weakest].imag())) weakest = k;
  flip[weakest] = 1;
  return fill_modes(s, flip);
}

cplx parity_expectation(const Matrix& cm) {
  const int L = static_cast<int>(cm.rows() / 2);
  const Matrix a = cm - Matrix::Identity(cm.rows(), cm.cols());
  return std::pow(kI, L) * pfaffian(0.5 * (a - a.transpose()), 1e-6);
}

cplx string_correlator(const Matrix& cm, int j, int k) {
  const int L = static_cast<int>(cm.rows() / 2);
  if (j < 0 || k >= L || j >= k) throw ConfigError("InvalidParams", "string correlator needs 0 <= j < k < L");
  // Z_j Z_k = -i b_j (prod_{j<l<k} i b_l a_l) a_k.
  std::vector<int> idx{majorana::b(j)};
  for (int l = j + 1; l < k; ++l) {
    idx.push_back(majorana::b(l));
    idx.push_back(majorana::a(l));
  }
  idx.push_back(majorana::a(k));
  const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
  Matrix a(m, m);
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index c = 0; c < m; ++c) a(r, c) = r == c ? cplx(0) : cm(idx[r], idx[c]);
  a = 0.5 * (a - a.transpose()).eval();
  return -kI * std::pow(kI, k - j - 1) * pfaffian(a, 1e-6);
}

cplx string_correlator(const CorrelationState& state, int j, int k) {
  return string_correlator(state.majorana_correlation(), j, k);
}

Observables observables(const CorrelationState& state) {
  const Matrix cm = state.majorana_correlation();
  const int L = state.L();
  Observables o;
  for (int j = 0; j < L; ++j) o.y.push_back((kI * cm(majorana::b(j), majorana::a(j))).real());
  for (int j = 0; j + 1 < L; ++j) o.zz.push_back((-kI * cm(majorana::b(j), majorana::a(j + 1))).real());
  o.parity = parity_expectation(cm).real();
  return o;
}

double overlap_magnitude(const CorrelationState& s1, const CorrelationState& s2) {
  if (s1.L() != s2.L()) throw ConfigError("InvalidParams", "states of different sizes");
  const Matrix g = s1.isometry().adjoint() * s2.isometry();
  const Eigen::PartialPivLU<Matrix> lu(g);
  double log_abs = 0.0;
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    const double d = std::abs(lu.matrixLU()(i, i));
    if (d == 0.0) return 0.0;
    log_abs += std::log(d);
  }
  return std::min(1.0, std::exp(0.5 * log_abs));
}

double entanglement_entropy(const CorrelationState& state, int cut) {
  const int L = state.L();
  if (cut < 1 || cut >= L) throw ConfigError("InvalidParams", "cut must satisfy 1 <= cut < L");
  std::vector<int> idx;
  for (int j = 0; j < cut; ++j) idx.push_back(j);
  for (int j = 0; j < cut; ++j) idx.push_back(L + j);
  const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
  Matrix block(m, m);
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index c = 0; c < m; ++c) block(r, c) = state.correlation()(idx[r], idx[c]);
  const Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (block + block.adjoint()), Eigen::EigenvaluesOnly);
  auto h = [](double x) { return x > 0.0 ? -x * std::log(x) : 0.0; };
  double s = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double nu = std::clamp(es.eigenvalues()[i], 0.0, 1.0);
    s += h(nu) + h(1.0 - nu);
  }
  // The doubled block carries every mode twice (nu and 1 - nu).
  return 0.5 * s;
}

std::vector<double> entropy_profile(const CorrelationState& state) {
  std::vector<double> out;
  for (int cut = 1; cut < state.L(); ++cut) out.push_back(entanglement_entropy(state, cut));
  return out;
}

double InvariantDefects::max() const {
  return std::max({isometry, idempotency, trace, particle_hole, hermiticity});
}

InvariantDefects check_invariants(const CorrelationState& state) {
  const int L = state.L();
  const Matrix& u = state.isometry();
  const Matrix& c = state.correlation();
  const Eigen::Index n = c.rows();
  InvariantDefects d;
  d.isometry = (u.adjoint() * u - Matrix::Identity(L, L)).cwiseAbs().maxCoeff();
  d.idempotency = (c * c - c).cwiseAbs().maxCoeff();
  d.trace = std::abs(c.trace() - cplx(L));
  Matrix swapped(n, n);
  const Matrix ct = c.transpose();
  swapped.topLeftCorner(L, L) = ct.bottomRightCorner(L, L);
  swapped.topRightCorner(L, L) = ct.bottomLeftCorner(L, L);
  swapped.bottomLeftCorner(L, L) = ct.topRightCorner(L, L);
  swapped.bottomRightCorner(L, L) = ct.topLeftCorner(L, L);
  d.particle_hole = (swapped - (Matrix::Identity(n, n) - c)).cwiseAbs().maxCoeff();
  d.hermiticity = (c - c.adjoint()).cwiseAbs().maxCoeff();
  return d;
}

}  // namespace nufloquet
