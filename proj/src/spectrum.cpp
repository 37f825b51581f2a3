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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "nufloquet/detail/pairing.hpp"
#include "nufloquet/error.hpp"
#include "nufloquet/floquet.hpp"

namespace nufloquet {

namespace {

constexpr double kPi = std::numbers::pi;

// Representative ordering: larger imaginary part first, then larger real part.
bool eps_before(cplx a, cplx b, double tie) {
  if (std::abs(a.imag() - b.imag()) > tie) return a.imag() > b.imag();
  return a.real() > b.real();
}

}  // namespace

cplx wrap_quasi_energy(cplx eps) {
  double re = std::fmod(eps.real() + kPi / 2, kPi);
  if (re < 0) re += kPi;
  return {re - kPi / 2, eps.imag()};
}

QuasiSpectrum quasi_energies(const FloquetMatrix& v, const SpectrumOptions& opt) {
  const int n = static_cast<int>(v.m.rows());
  EigenDecomposition ed = eig(v.m, opt.vectors);
  QuasiSpectrum s;
  s.L = n / 2;
  s.raw.resize(n);
  s.raw_eps.resize(n);
  for (int k = 0; k < n; ++k) {
    s.raw[k] = ed.values(k);
    s.raw_eps[k] = 0.5 * kI * std::log(ed.values(k));
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return std::abs(s.raw_eps[a].imag()) > std::abs(s.raw_eps[b].imag()); });
  auto pairs = detail::greedy_pairs(
      order, [&](int a, int b) { return std::abs(wrap_quasi_energy(s.raw_eps[a] + s.raw_eps[b])); },
      [&](int a) { return opt.pair_tol * (1.0 + std::abs(s.raw_eps[a])); });

  const double tie = opt.branch_tol;
  auto first_is_plus = [&](cplx ma, cplx mb) {
    return eps_before(0.5 * kI * std::log(ma), 0.5 * kI * std::log(mb), tie);
  };
  for (auto& pr : pairs)
    if (!first_is_plus(s.raw[pr.first], s.raw[pr.second])) std::swap(pr.first, pr.second);

  if (opt.vectors) {
    s.right = std::move(ed.vectors);
    auto estimate = [&](const Vector& p, const Vector& q) { return (q.transpose() * (v.m * p))(0, 0); };
    detail::repair_pairs(s.right, pairs, s.raw, opt.degeneracy_tol, estimate, first_is_plus);
    s.left.resize(n, n);
    for (const auto& [p, m] : pairs) {
      s.left.col(p) = s.right.col(m);
      s.left.col(m) = s.right.col(p);
    }
    if (opt.check_condition) {
      s.rcond = rcond_unit_columns(s.right);
      if (!(s.rcond * opt.condition_limit >= 1.0))
        throw NumericalError("IllConditioned", "eigenvector condition number " + std::to_string(1.0 / s.rcond) +
                                                   " exceeds " + std::to_string(opt.condition_limit));
    }
  }

  std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& x, const auto& y) {
    return eps_before(s.raw_eps[x.first], s.raw_eps[y.first], 0.0);
  });
  for (const auto& [p, m] : pairs) {
    const cplx e = wrap_quasi_energy(s.raw_eps[p]);
    s.eps.push_back(e);
    s.plus.push_back(p);
    s.minus.push_back(m);
    const bool mid = std::abs(e.imag()) < opt.gap_tol;
    const bool branch = mid && (kPi / 2 - std::abs(e.real()) < opt.branch_tol) &&
                        std::abs(s.raw[p] - s.raw[m]) <= 4.0 * opt.gap_tol * (1.0 + std::abs(s.raw[p]));
    s.mid_gap.push_back(mid);
    s.half_pi.push_back(branch);
    if (branch) ++s.half_pi_count;
  }
  return s;
}

std::pair<cplx, cplx> analytic_spectrum(double beta, double h_y, double k) {
  const cplx z(std::cosh(2 * beta) * std::cos(2 * h_y), std::sinh(2 * beta) * std::sin(2 * h_y) * std::cos(k));
  const cplx root = std::sqrt(1.0 - z * z);
  const cplx m1 = z + kI * root;
  const cplx m2 = z - kI * root;
  return {0.5 * kI * std::log(m1), 0.5 * kI * std::log(m2)};
}

std::vector<double> momentum_grid(int L, Boundary bc) {
  if (bc == Boundary::Open) throw ConfigError("InvalidBoundary", "momenta are defined for closed chains only");
  const double shift = bc == Boundary::Antiperiodic ? 0.5 : 0.0;
  std::vector<double> ks(L);
  for (int n = 0; n < L; ++n) {
    double k = 2 * kPi * (n + shift) / L;
    if (k > kPi) k -= 2 * kPi;
    ks[n] = k;
  }
  return ks;
}

}  // namespace nufloquet
