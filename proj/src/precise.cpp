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

#include "nufloquet/precise.hpp"

#include <boost/multiprecision/cpp_complex.hpp>

#include "nufloquet/detail/assembly.hpp"
#include "nufloquet/error.hpp"
#include "nufloquet/floquet.hpp"

namespace nufloquet {

namespace {

namespace mp = boost::multiprecision;

template <unsigned Digits>
using Complex = mp::cpp_complex<Digits>;

template <unsigned Digits>
using Real = typename Complex<Digits>::value_type;

template <unsigned Digits>
double log10_abs(const Complex<Digits>& z) {
  const Real<Digits> a = abs(z);
  if (a == 0) return -static_cast<double>(Digits) - 10.0;
  return static_cast<double>(log10(a));
}

template <unsigned Digits>
cplx to_double(const Complex<Digits>& z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

template <unsigned Digits>
ExtendedResult solve_smallest(const BandedMatrix<Complex<Digits>>& a, int target) {
  const Real<Digits> tiny = pow(Real<Digits>(10), -static_cast<int>(Digits) + 5);
  const auto ritz = smallest_two_eigenpairs(a, tiny, 60, 1e-20);
  ExtendedResult r;
  r.digits = static_cast<int>(Digits);
  r.iterations = ritz.iterations;
  r.log10_min_abs = std::min(log10_abs<Digits>(ritz.values[0]), log10_abs<Digits>(ritz.values[1]));
  for (int k = 0; k < 2; ++k) {
    r.values[k] = to_double<Digits>(ritz.values[k]);
    if (target != 0) {
      const Complex<Digits> m = ritz.values[k] + Complex<Digits>(target);
      const Real<Digits> lm = log(abs(m));
      r.im_eps[k] = static_cast<double>(abs(lm)) / 2;
    }
  }
  return r;
}

// Digits are raised until the answer clears its rounding floor by 20 digits.
template <class Attempt>
ExtendedResult escalate(Attempt&& attempt) {
  ExtendedResult r = attempt(std::integral_constant<unsigned, 40>{});
  if (r.log10_min_abs > -20.0) return r;
  r = attempt(std::integral_constant<unsigned, 80>{});
  if (r.log10_min_abs > -60.0) return r;
  r = attempt(std::integral_constant<unsigned, 160>{});
  if (r.log10_min_abs > -140.0) return r;
  r = attempt(std::integral_constant<unsigned, 320>{});
  if (r.log10_min_abs > -300.0) return r;
  throw NumericalError("PrecisionExhausted", "eigenvalue below 1e-300 even at 320 digits");
}

}  // namespace

ExtendedResult extended_floquet_near(const ModelParams& p, int target) {
  if (p.closed()) throw ConfigError("InvalidBoundary", "extended-precision path needs an open chain");
  if (target != 1 && target != -1) throw ConfigError("InvalidParams", "target must be +1 or -1");
  const DriveFactors f = drive_factors(p, 0);
  const int n = 2 * p.L;
  return escalate([&](auto digits) {
    constexpr unsigned D = decltype(digits)::value;
    const auto a = detail::floquet_plus_shift<Complex<D>>(f, n, Complex<D>(-target));
    return solve_smallest<D>(a, target);
  });
}

ExtendedResult extended_boundary_smallest(const ModelParams& p, int sign) {
  if (p.closed()) throw ConfigError("InvalidBoundary", "boundary matrix needs an open chain");
  if (p.has_zz_phase())
    throw ConfigError("UnsupportedCouplings", "boundary matrix is built for J_zz = 0 only");
  const DriveFactors f = drive_factors(p, 0);
  const int n = 2 * p.L;
  return escalate([&](auto digits) {
    constexpr unsigned D = decltype(digits)::value;
    const auto a = detail::boundary_matrix<Complex<D>>(f, n, sign);
    return solve_smallest<D>(a, 0);
  });
}

}  // namespace nufloquet
