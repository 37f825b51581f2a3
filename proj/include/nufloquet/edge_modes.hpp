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

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nufloquet/banded.hpp"
#include "nufloquet/floquet.hpp"
#include "nufloquet/linalg.hpp"
#include "nufloquet/model.hpp"
#include "nufloquet/types.hpp"

namespace nufloquet {

enum class ModeSide { Left, Right };
std::string to_string(ModeSide side);

// Sign of the mode relation: V F = sign F.
inline constexpr int kAnticommuting = -1;
inline constexpr int kCommuting = +1;

struct EdgeMode {
  // coeffs[2s] multiplies a_s and coeffs[2s + 1] multiplies b_s (0-based site
  // s). Unit norm, largest entry real and positive.
  Vector coeffs;
  ModeSide side = ModeSide::Left;
  int sign = kAnticommuting;
  // ||(V - sign) F0|| when known, NaN otherwise.
  double defect = 0.0;

  int L() const { return static_cast<int>(coeffs.size() / 2); }
  // Coefficients in canonical Majorana order (b_0, a_0, b_1, a_1, ...).
  Vector canonical() const;
  // sqrt(|v_a|^2 + |v_b|^2) per site.
  std::vector<double> pair_norms() const;
};

struct TransferMatrix {
  Eigen::Matrix2cd entries;
  std::array<cplx, 4> alphas{};
  // lambda_1 = i cot(h) coth(beta), lambda_2 = 1 / lambda_1.
  std::array<cplx, 2> eigenvalues{};
};

// Propagates (v_{2j}, v_{2j-1}) to (v_{2j+2}, v_{2j+1}) for J = 0.
// Throws ConfigError("SingularParameters") when sin 2h or sinh 2 beta vanish.
TransferMatrix transfer_matrix(double beta, double h_y);

// Closed-form anticommuting mode of the open chain with J = 0. The defect is
// evaluated against the banded Floquet matrix.
// Throws NumericalError("NotLocalized") when |lambda_1| >= 1.
EdgeMode analytic_edge_mode(double beta, double h_y, int L, ModeSide side = ModeSide::Left);

// Boundary equations M F = 0 in coefficient order, open chain, J_zz = 0.
// Their kernel is the kernel of V - sign. Throws ConfigError("InvalidBoundary")
// or ConfigError("UnsupportedCouplings").
BandedMatrix<cplx> boundary_matrix_m(const ModelParams& p, int sign = kAnticommuting);

struct BoundaryEigenvalue {
  double min_abs = 0.0;        // underflows to 0 when extended precision was needed
  double log10_min_abs = 0.0;  // always meaningful
  std::string method;          // "dense" or "extended-<digits>"
};

// Smallest |eigenvalue| of M. Dense LAPACK first; values within 1e-8 of the
// matrix norm are recomputed in extended precision.
BoundaryEigenvalue boundary_smallest_eigenvalue(const ModelParams& p, int sign = kAnticommuting);

// Kernel vector of M from double-precision banded inverse iteration, localized
// on `side`. Throws NumericalError("NoCandidateMode").
EdgeMode boundary_kernel_mode(const ModelParams& p, int sign = kAnticommuting, ModeSide side = ModeSide::Left,
                              double defect_tol = -1.0);

// Eigenvector of V with eigenvalue closest to `sign`. When two eigenvalues
// are within tolerance (the two edges of a long chain), the combination
// localized on `side` is returned. defect_tol < 0 selects 1e-6 * 2L.
// Throws NumericalError("NoCandidateMode").
EdgeMode floquet_kernel_mode(const FloquetMatrix& v, int sign, ModeSide side = ModeSide::Left,
                             double defect_tol = -1.0);

// Same for an open chain, using banded inverse iteration instead of a dense
// eigendecomposition.
EdgeMode floquet_kernel_mode(const ModelParams& p, int sign, ModeSide side = ModeSide::Left,
                             double defect_tol = -1.0);

struct ModeReport {
  double defect = 0.0;
  bool defect_ok = false;
  // Both hold structurally for an operator linear in Majoranas.
  bool parity_anticommutation = true;
  bool square_identity = true;
  // ln(pair norm) against distance from the localized edge.
  LinearFit decay_fit;
  int fit_first_site = 0;
  int fit_last_site = 0;
};

// Decay fit over sites 2 .. L/4 counted from the localized edge, stopping
// where the pair norm falls to `noise_floor` times its maximum.
LinearFit fit_decay(const EdgeMode& mode, double noise_floor = 1e-13, int* first = nullptr, int* last = nullptr);

ModeReport verify_mode(const FloquetMatrix& v, const EdgeMode& mode, double defect_tol = -1.0);
ModeReport verify_mode(const ModelParams& p, const EdgeMode& mode, double defect_tol = -1.0);

// |<a|b>| for unit vectors, insensitive to global phase.
double mode_overlap(const EdgeMode& a, const EdgeMode& b);

}  // namespace nufloquet
