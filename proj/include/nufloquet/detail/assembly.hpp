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

#pragma once

#include <cmath>
#include <vector>

#include "nufloquet/banded.hpp"
#include "nufloquet/floquet.hpp"

// Banded assembly of open-chain single-particle matrices in any complex
// scalar type. Rotation angles are taken from the double-precision factors
// and the cos/sin are re-evaluated in the target precision, so each block
// stays exactly orthogonal at that precision.
namespace nufloquet::detail {

template <class C>
C complex_cos(const C& x) {
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  const auto re = x.real();
  const auto im = x.imag();
  return C(cos(re) * cosh(im), -(sin(re) * sinh(im)));
}

template <class C>
C complex_sin(const C& x) {
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  const auto re = x.real();
  const auto im = x.imag();
  return C(sin(re) * cosh(im), cos(re) * sinh(im));
}

template <class C>
void apply_factor(BandedMatrix<C>& m, const FloquetFactor& f) {
  for (const auto& r : f.blocks()) {
    const C x(r.angle.real(), r.angle.imag());
    m.mix_rows(r.p, r.q, complex_cos(x), complex_sin(x));
  }
}

// V + shift in canonical ordering.
template <class C>
BandedMatrix<C> floquet_plus_shift(const DriveFactors& f, int n, const C& shift) {
  auto m = BandedMatrix<C>::identity(n, 5, 5);
  apply_factor(m, f.y);
  apply_factor(m, f.xx);
  apply_factor(m, f.zz_phase);
  apply_factor(m, f.zz_measure);
  m.add_identity(shift);
  return m;
}

// Canonical index of the k-th edge-mode coefficient: v_{2j-1} multiplies a_j,
// v_{2j} multiplies b_j.
inline std::vector<int> coefficient_order(int n) {
  std::vector<int> perm(n);
  for (int j = 0; 2 * j < n; ++j) {
    perm[2 * j] = 2 * j + 1;
    perm[2 * j + 1] = 2 * j;
  }
  return perm;
}

// M = X Y + sign * Z^{-1} in coefficient order, where V = Z X Y. For sign = +1
// M F = 0 is equivalent to (V + 1) F = 0, for sign = -1 to (V - 1) F = 0.
template <class C>
BandedMatrix<C> boundary_matrix(const DriveFactors& f, int n, int sign) {
  auto xy = BandedMatrix<C>::identity(n, 5, 5);
  apply_factor(xy, f.y);
  apply_factor(xy, f.xx);
  auto zinv = BandedMatrix<C>::identity(n, 5, 5);
  apply_factor(zinv, f.zz_measure.inverse());
  for (int i = 0; i < n; ++i)
    for (int j = zinv.col_begin(i); j <= zinv.col_end(i); ++j) {
      if (sign > 0)
        xy.at(i, j) += zinv.at(i, j);
      else
        xy.at(i, j) -= zinv.at(i, j);
    }
  return xy.permuted(coefficient_order(n), 5, 5);
}

}  // namespace nufloquet::detail
