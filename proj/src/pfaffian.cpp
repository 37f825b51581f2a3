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

#include <cmath>
#include <sstream>

#include "nufloquet/error.hpp"
#include "nufloquet/gaussian.hpp"

namespace nufloquet {

// Parlett-Reid tridiagonalization with partial pivoting. Each elimination
// step is a congruence by a unit lower-triangular matrix, which leaves the
// Pfaffian unchanged; row/column swaps flip its sign.
cplx pfaffian(const Matrix& input, double antisymmetry_tol) {
  const Eigen::Index n = input.rows();
  if (input.cols() != n) throw ConfigError("NotAntisymmetric", "matrix is not square");
  if (n % 2 != 0) throw ConfigError("OddDimension", "Pfaffian of an odd-dimensional matrix");
  if (n == 0) return 1.0;
  const double scale = std::max(1.0, input.cwiseAbs().maxCoeff());
  const double asym = (input + input.transpose()).cwiseAbs().maxCoeff();
  if (asym > antisymmetry_tol * scale) {
    std::ostringstream msg;
    msg << "max |A + A^T| = " << asym;
    throw ConfigError("NotAntisymmetric", msg.str());
  }

  Matrix a = input;
  cplx pf = 1.0;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index kp = 0;
    a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&kp);
    kp += k + 1;
    if (kp != k + 1) {
      a.row(k + 1).swap(a.row(kp));
      a.col(k + 1).swap(a.col(kp));
      pf = -pf;
    }
    if (a(k + 1, k) == cplx(0)) return 0.0;
    pf *= a(k, k + 1);
    const Eigen::Index rest = n - k - 2;
    if (rest > 0) {
      const Vector tau = a.row(k).tail(rest).transpose() / a(k, k + 1);
      const Vector col = a.col(k + 1).tail(rest);
      a.bottomRightCorner(rest, rest) += tau * col.transpose() - col * tau.transpose();
    }
  }
  return pf;
}

}  // namespace nufloquet
