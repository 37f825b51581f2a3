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

#include "nufloquet/model.hpp"
#include "nufloquet/types.hpp"

// Extended-precision routines for quantities that fall below double rounding
// noise: the splitting of the mid-gap pair and the smallest eigenvalue of the
// boundary matrix shrink like |lambda_1|^L. Both run banded inverse iteration
// on open chains; the working precision is raised until the answer sits well
// above its rounding floor.
namespace nufloquet {

struct ExtendedResult {
  // The two eigenvalues closest to zero, rounded to double.
  std::array<cplx, 2> values{};
  // min |values| as a base-10 logarithm, valid below the double range too.
  double log10_min_abs = 0.0;
  // For Floquet runs: |Im eps| of the two modes, 0.5 * |ln|target + value||.
  std::array<double, 2> im_eps{};
  int digits = 0;
  int iterations = 0;
};

// Eigenvalues of V - target (target = +-1) nearest zero, open chain.
ExtendedResult extended_floquet_near(const ModelParams& p, int target);

// Smallest eigenvalues of the boundary matrix M (sign = +1 for the
// anticommuting equations, -1 for the commuting ones). Requires J_zz = 0.
ExtendedResult extended_boundary_smallest(const ModelParams& p, int sign = 1);

}  // namespace nufloquet
