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
#include <numeric>

#include "nufloquet/detail/pairing.hpp"
#include "nufloquet/error.hpp"
#include "nufloquet/floquet.hpp"

namespace nufloquet {

namespace {

// Positive real part, or positive imaginary part on the imaginary axis.
bool positive_by_rule(cplx lam, double tol) {
  if (std::abs(lam.real()) > tol) return lam.real() > 0;
  return lam.imag() > 0;
}

}  // namespace

HamiltonianDiagonalization diagonalize_hamiltonian(const MajoranaMatrix& h, const SpectrumOptions& opt) {
  const int n = h.dim();
  if (n % 2 != 0 || n == 0) throw ConfigError("NonAntisymmetricInput", "dimension must be even and positive");
  const Matrix hd = h.dense();
  EigenDecomposition ed = eig(hd, true);
  std::vector<cplx> lam(ed.values.data(), ed.values.data() + n);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return std::abs(lam[a]) > std::abs(lam[b]); });
  auto pairs = detail::greedy_pairs(
      order, [&](int a, int b) { return std::abs(lam[a] + lam[b]); },
      [&](int a) { return opt.pair_tol * (1.0 + std::abs(lam[a])); });

  const double tie = opt.branch_tol;
  auto first_is_plus = [&](cplx a, cplx b) {
    if (positive_by_rule(a, tie) != positive_by_rule(b, tie)) return positive_by_rule(a, tie);
    return a.real() + a.imag() >= b.real() + b.imag();
  };
  for (auto& pr : pairs)
    if (!first_is_plus(lam[pr.first], lam[pr.second])) std::swap(pr.first, pr.second);

  Matrix vecs = std::move(ed.vectors);
  auto estimate = [&](const Vector& p, const Vector& q) { return (q.transpose() * (hd * p))(0, 0); };
  detail::repair_pairs(vecs, pairs, lam, opt.degeneracy_tol, estimate, first_is_plus);

  std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& x, const auto& y) {
    const cplx a = lam[x.first], b = lam[y.first];
    if (a.imag() != b.imag()) return a.imag() > b.imag();
    return a.real() > b.real();
  });

  HamiltonianDiagonalization out;
  const int L = n / 2;
  out.v.resize(n, n);
  out.x.resize(n, n);
  const double r2 = std::sqrt(0.5);
  for (int j = 0; j < L; ++j) {
    const auto [p, m] = pairs[j];
    out.lambda.push_back(lam[p]);
    out.v.col(2 * j) = vecs.col(p);
    out.v.col(2 * j + 1) = vecs.col(m);
    out.x.col(2 * j) = r2 * (vecs.col(p) + vecs.col(m));
    out.x.col(2 * j + 1) = kI * r2 * (vecs.col(p) - vecs.col(m));
  }
  const double defect = (out.x.transpose() * out.x - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!(defect < 1e-8))
    throw NumericalError("DegeneracyRepairFailed", "X^T X deviates from identity by " + std::to_string(defect));

  // Quasi-energy view, eps = lambda / 2 with the representative taken on the
  // side of positive imaginary part.
  QuasiSpectrum& s = out.spectrum;
  s.L = L;
  s.raw.resize(n);
  s.raw_eps.resize(n);
  s.right = out.v;
  s.left.resize(n, n);
  std::vector<std::pair<int, int>> qpairs;
  for (int j = 0; j < L; ++j) {
    const cplx lp = out.lambda[j];
    s.raw_eps[2 * j] = lp / 2.0;
    s.raw_eps[2 * j + 1] = -lp / 2.0;
    s.raw[2 * j] = std::exp(-kI * lp);
    s.raw[2 * j + 1] = std::exp(kI * lp);
    s.left.col(2 * j) = out.v.col(2 * j + 1);
    s.left.col(2 * j + 1) = out.v.col(2 * j);
    const bool swap = std::abs(lp.imag()) > tie ? lp.imag() < 0 : lp.real() < 0;
    qpairs.emplace_back(swap ? 2 * j + 1 : 2 * j, swap ? 2 * j : 2 * j + 1);
  }
  std::stable_sort(qpairs.begin(), qpairs.end(), [&](const auto& x, const auto& y) {
    const cplx a = s.raw_eps[x.first], b = s.raw_eps[y.first];
    if (a.imag() != b.imag()) return a.imag() > b.imag();
    return a.real() > b.real();
  });
  for (const auto& [p, m] : qpairs) {
    const cplx e = s.raw_eps[p];
    s.eps.push_back(e);
    s.plus.push_back(p);
    s.minus.push_back(m);
    const bool mid = std::abs(e.imag()) < opt.gap_tol;
    const bool branch = mid && std::abs(std::abs(wrap_quasi_energy(e).real()) - 1.5707963267948966) < opt.branch_tol;
    s.mid_gap.push_back(mid);
    s.half_pi.push_back(branch);
    if (branch) ++s.half_pi_count;
  }
  return out;
}

Matrix floquet_hamiltonian(const QuasiSpectrum& s) {
  if (s.right.size() == 0) throw ConfigError("InvalidParams", "spectrum was computed without eigenvectors");
  const int n = static_cast<int>(s.right.rows());
  Matrix hf = Matrix::Zero(n, n);
  for (std::size_t j = 0; j < s.plus.size(); ++j) {
    const cplx lam = 2.0 * s.eps[j];
    const Vector& p = s.right.col(s.plus[j]);
    const Vector& m = s.right.col(s.minus[j]);
    hf += lam * (p * m.transpose() - m * p.transpose());
  }
  return hf;
}

}  // namespace nufloquet
