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

#include "nufloquet/linalg.hpp"

#include <lapacke.h>

#include <Eigen/LU>

#include "nufloquet/error.hpp"

namespace nufloquet {

EigenDecomposition eig(const Matrix& a, bool want_vectors) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  EigenDecomposition out;
  out.values.resize(n);
  if (n == 0) return out;
  Matrix work = a;
  Matrix vr;
  if (want_vectors) vr.resize(n, n);
  const lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n,
      reinterpret_cast<lapack_complex_double*>(work.data()), n,
      reinterpret_cast<lapack_complex_double*>(out.values.data()), nullptr, 1,
      want_vectors ? reinterpret_cast<lapack_complex_double*>(vr.data()) : nullptr, n);
  if (info != 0) throw NumericalError("EigensolverFailed", "zgeev returned info = " + std::to_string(info));
  if (want_vectors) out.vectors = std::move(vr);
  return out;
}

double rcond_unit_columns(const Matrix& r) {
  Matrix s = r;
  for (int k = 0; k < s.cols(); ++k) {
    const double nrm = s.col(k).norm();
    if (nrm > 0.0) s.col(k) /= nrm;
  }
  Eigen::PartialPivLU<Matrix> lu(s);
  return lu.rcond();
}

}  // namespace nufloquet
