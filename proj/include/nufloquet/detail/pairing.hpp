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

#include <functional>
#include <utility>
#include <vector>

#include "nufloquet/types.hpp"

namespace nufloquet::detail {

// Nearest-match partner assignment. Indices are visited in `order`; each
// takes the closest unmatched partner under `distance`. Throws
// NumericalError("PairingFailed") when the best distance exceeds tol(a).
std::vector<std::pair<int, int>> greedy_pairs(const std::vector<int>& order,
                                              const std::function<double(int, int)>& distance,
                                              const std::function<double(int)>& tol);

// Makes paired eigenvectors biorthonormal: plus_i^T minus_k = delta_ik and
// plus^T plus = minus^T minus = 0. Eigenvalues closer than `cluster_tol`
// (relative) are treated as one eigenspace. Within a cluster that contains
// its own partners, isotropic pairs are built by bilinear Gram-Schmidt and
// ordered with `estimate` (eigenvalue of a vector given its dual) and
// `first_is_plus`. Throws NumericalError("DegeneracyRepairFailed").
void repair_pairs(Matrix& vecs, std::vector<std::pair<int, int>>& pairs, const std::vector<cplx>& key,
                  double cluster_tol, const std::function<cplx(const Vector&, const Vector&)>& estimate,
                  const std::function<bool(cplx, cplx)>& first_is_plus);

}  // namespace nufloquet::detail
