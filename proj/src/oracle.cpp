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

#include "nufloquet/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include <Eigen/SVD>

#include "nufloquet/error.hpp"
#include "nufloquet/linalg.hpp"

namespace nufloquet {

namespace {

std::uint64_t site_bit(int L, int j) { return std::uint64_t{1} << (L - 1 - j); }

struct Bond {
  std::uint64_t mask;  // both sites
  std::uint64_t i_bit, k_bit;
  double sign;         // -1 on the wrap bond of an antiperiodic chain
  int index;
};

std::vector<Bond> bonds(const ModelParams& p) {
  std::vector<Bond> out;
  const auto sites = bond_sites(p);
  for (std::size_t b = 0; b < sites.size(); ++b) {
    const auto [i, k] = sites[b];
    const bool wrap = p.closed() && b + 1 == sites.size();
    const double sign = wrap && p.bc == Boundary::Antiperiodic ? -1.0 : 1.0;
    out.push_back({site_bit(p.L, i) | site_bit(p.L, k), site_bit(p.L, i), site_bit(p.L, k), sign, static_cast<int>(b)});
  }
  return out;
}

double zz_value(std::uint64_t basis, const Bond& b) {
  const bool ui = (basis & b.i_bit) != 0, uk = (basis & b.k_bit) != 0;
  return ui == uk ? 1.0 : -1.0;
}

// exp(-i theta P) for P = X X or Y Y on one bond.
void apply_bond_rotation(Vector& amp, const Bond& b, double theta, bool yy) {
  if (theta == 0.0) return;
  const double c = std::cos(theta), s = std::sin(theta);
  const Vector old = amp;
  for (Eigen::Index basis = 0; basis < amp.size(); ++basis) {
    const auto flipped = static_cast<Eigen::Index>(static_cast<std::uint64_t>(basis) ^ b.mask);
    // Y Y |..u..v..> = -(-1)^{u+v} |flipped>, which is -zz of the basis state.
    const double factor = yy ? -zz_value(static_cast<std::uint64_t>(basis), b) : 1.0;
    amp[basis] = c * old[basis] - kI * s * factor * old[flipped];
  }
}

void apply_field_rotations(Vector& amp, int L, const std::vector<double>& h) {
  for (int j = 0; j < L; ++j) {
    const double c = std::cos(h[j]), s = std::sin(h[j]);
    const auto bit = static_cast<Eigen::Index>(site_bit(L, j));
    for (Eigen::Index basis = 0; basis < amp.size(); ++basis) {
      if (basis & bit) continue;
      const cplx up = amp[basis], down = amp[basis | bit];
      amp[basis] = c * up - s * down;
      amp[basis | bit] = s * up + c * down;
    }
  }
}

void apply_diagonal_zz(Vector& amp, const ModelParams& p, const std::vector<Bond>& bs, bool phase, bool measure) {
  for (Eigen::Index basis = 0; basis < amp.size(); ++basis) {
    double zz_phase = 0.0, zz_sum = 0.0;
    for (const Bond& b : bs) {
      const double v = b.sign * zz_value(static_cast<std::uint64_t>(basis), b);
      zz_phase += p.j_zz[b.index] * v;
      zz_sum += v;
    }
    cplx f = 1.0;
    if (phase) f *= std::exp(-kI * zz_phase);
    if (measure) f *= std::exp(p.beta * zz_sum);
    amp[basis] *= f;
  }
}

void normalize(Vector& amp) {
  const double n = amp.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw NumericalError("NormUnderflow", "state vector norm is not positive");
  amp /= n;
}

}  // namespace

void check_oracle_size(int L, int limit) {
  if (L < 1 || L > limit)
    throw ConfigError("SizeExceeded", "exact engine supports 1 <= L <= " + std::to_string(limit) + ", got " +
                                          std::to_string(L));
}

DenseState z_product_state(const std::vector<bool>& down) {
  const int L = static_cast<int>(down.size());
  check_oracle_size(L);
  std::uint64_t basis = 0;
  for (int j = 0; j < L; ++j)
    if (down[j]) basis |= site_bit(L, j);
  DenseState s{L, Vector::Zero(Eigen::Index{1} << L)};
  s.amp[static_cast<Eigen::Index>(basis)] = 1.0;
  return s;
}

DenseState y_fock_state(const std::vector<bool>& occupied) {
  const int L = static_cast<int>(occupied.size());
  check_oracle_size(L);
  DenseState s{L, Vector::Zero(Eigen::Index{1} << L)};
  const double norm = std::pow(0.5, 0.5 * L);
  for (Eigen::Index basis = 0; basis < s.amp.size(); ++basis) {
    cplx v = norm;
    for (int j = 0; j < L; ++j)
      if (static_cast<std::uint64_t>(basis) & site_bit(L, j)) v *= occupied[j] ? kI : -kI;
    s.amp[basis] = v;
  }
  return s;
}

void apply_floquet_unnormalized(Vector& amp, const ModelParams& p, std::int64_t step) {
  p.validate();
  check_oracle_size(p.L);
  const auto bs = bonds(p);
  apply_field_rotations(amp, p.L, field_sequence(p, step));
  auto xx = [&] {
    for (const Bond& b : bs) apply_bond_rotation(amp, b, b.sign * p.j_xx[b.index], false);
  };
  auto yy = [&] {
    for (const Bond& b : bs) apply_bond_rotation(amp, b, b.sign * p.j_yy[b.index], true);
  };
  if (p.yy_placement == YYPlacement::BeforeXX) {
    yy();
    xx();
  } else {
    xx();
    yy();
  }
  apply_diagonal_zz(amp, p, bs, true, true);
}

DenseState apply_floquet(const DenseState& state, const ModelParams& p, std::int64_t step) {
  if (state.L != p.L) throw ConfigError("InvalidParams", "state and model sizes differ");
  DenseState out = state;
  apply_floquet_unnormalized(out.amp, p, step);
  normalize(out.amp);
  return out;
}

DenseState apply_zz_measure(const DenseState& state, const ModelParams& p) {
  DenseState out = state;
  apply_diagonal_zz(out.amp, p, bonds(p), false, true);
  normalize(out.amp);
  return out;
}

PauliString majorana_string(int L, int index) {
  // b_j = (prod_{l<j} Y_l) X_j, a_j = (prod_{l<j} Y_l) Z_j.
  const int j = index / 2;
  PauliString p;
  for (int l = 0; l < j; ++l) {
    p.x |= site_bit(L, l);
    p.z |= site_bit(L, l);
  }
  p.n_y = j;
  if (index % 2 == 0)
    p.x |= site_bit(L, j);
  else
    p.z |= site_bit(L, j);
  return p;
}

Vector apply_pauli(const Vector& amp, const PauliString& p) {
  Vector out(amp.size());
  const cplx phase = std::pow(kI, p.n_y % 4);
  for (Eigen::Index basis = 0; basis < amp.size(); ++basis) {
    const auto b = static_cast<std::uint64_t>(basis);
    const double sign = std::popcount(b & p.z) % 2 ? -1.0 : 1.0;
    out[static_cast<Eigen::Index>(b ^ p.x)] = phase * sign * amp[basis];
  }
  return out;
}

cplx expectation(const DenseState& state, const PauliString& p) { return state.amp.dot(apply_pauli(state.amp, p)); }

Measurement measure(const DenseState& s, bool with_majorana) {
  check_oracle_size(s.L);
  const int L = s.L;
  Measurement m;
  const Eigen::VectorXd prob = s.amp.cwiseAbs2();
  for (int j = 0; j < L; ++j) {
    double z = 0.0;
    for (Eigen::Index b = 0; b < prob.size(); ++b) z += (static_cast<std::uint64_t>(b) & site_bit(L, j)) ? -prob[b] : prob[b];
    m.z.push_back(z);
    m.y.push_back(expectation(s, PauliString{site_bit(L, j), site_bit(L, j), 1}).real());
  }
  m.zz = Matrix::Ones(L, L);
  for (int j = 0; j < L; ++j)
    for (int k = j + 1; k < L; ++k) {
      double v = 0.0;
      const std::uint64_t mask = site_bit(L, j) | site_bit(L, k);
      for (Eigen::Index b = 0; b < prob.size(); ++b)
        v += std::popcount(static_cast<std::uint64_t>(b) & mask) % 2 ? -prob[b] : prob[b];
      m.zz(j, k) = m.zz(k, j) = v;
    }
  const std::uint64_t all = (std::uint64_t{1} << L) - 1;
  m.parity = expectation(s, PauliString{all, all, L}).real();
  if (with_majorana) {
    std::vector<Vector> g;
    for (int mu = 0; mu < 2 * L; ++mu) g.push_back(apply_pauli(s.amp, majorana_string(L, mu)));
    m.majorana.resize(2 * L, 2 * L);
    // <gamma_mu gamma_nu> = <gamma_mu psi | gamma_nu psi>.
    for (int mu = 0; mu < 2 * L; ++mu)
      for (int nu = 0; nu < 2 * L; ++nu) m.majorana(mu, nu) = g[mu].dot(g[nu]);
  }
  return m;
}

double mean_z(const DenseState& s) {
  double total = 0.0;
  for (Eigen::Index b = 0; b < s.amp.size(); ++b) {
    const int down = std::popcount(static_cast<std::uint64_t>(b));
    total += std::norm(s.amp[b]) * (s.L - 2 * down);
  }
  return total / s.L;
}

double oracle_entropy(const DenseState& s, int cut) {
  if (cut < 1 || cut >= s.L) throw ConfigError("InvalidParams", "cut must satisfy 1 <= cut < L");
  const Eigen::Index right = Eigen::Index{1} << (s.L - cut);
  const Eigen::Index left = Eigen::Index{1} << cut;
  // Column-major map: rows index the right block, columns the left block.
  const Eigen::Map<const Matrix> psi(s.amp.data(), right, left);
  const Eigen::BDCSVD<Matrix> svd(psi);
  double e = 0.0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    const double p = svd.singularValues()[i] * svd.singularValues()[i];
    if (p > 1e-300) e -= p * std::log(p);
  }
  return e;
}

double oracle_overlap(const DenseState& a, const DenseState& b) { return std::abs(a.amp.dot(b.amp)); }

ManyBodySpectrum spectral_decompose(const ModelParams& p, std::int64_t step) {
  check_oracle_size(p.L, 8);
  const Eigen::Index dim = Eigen::Index{1} << p.L;
  Matrix v(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    Vector e = Vector::Zero(dim);
    e[c] = 1.0;
    apply_floquet_unnormalized(e, p, step);
    v.col(c) = e;
  }
  const EigenDecomposition ed = eig(v, true);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return std::abs(ed.values[x]) > std::abs(ed.values[y]); });
  ManyBodySpectrum out;
  out.vectors.resize(dim, dim);
  const std::uint64_t all = (std::uint64_t{1} << p.L) - 1;
  for (Eigen::Index k = 0; k < dim; ++k) {
    out.values.push_back(ed.values[order[k]]);
    out.vectors.col(k) = ed.vectors.col(order[k]).normalized();
    DenseState st{p.L, out.vectors.col(k)};
    out.parity.push_back(expectation(st, PauliString{all, all, p.L}).real());
  }
  return out;
}

std::vector<cplx> free_fermion_products(const QuasiSpectrum& s, cplx top) {
  const int L = s.L;
  std::vector<cplx> out;
  for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << L); ++subset) {
    cplx v = top;
    for (int k = 0; k < L; ++k)
      if (subset >> k & 1) v /= s.raw[s.plus[k]];
    out.push_back(v);
  }
  return out;
}

DenseState oracle_steady_state(const ManyBodySpectrum& spec, int parity) {
  for (std::size_t k = 0; k < spec.values.size(); ++k)
    if ((spec.parity[k] >= 0 ? 1 : -1) == parity) {
      const int L = std::countr_zero(static_cast<std::uint64_t>(spec.vectors.rows()));
      return DenseState{L, spec.vectors.col(static_cast<Eigen::Index>(k))};
    }
  throw NumericalError("NoCandidateMode", "no eigenvector in the requested parity sector");
}

}  // namespace nufloquet
