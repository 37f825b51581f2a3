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

#include <vector>

#include "nufloquet/types.hpp"

namespace nufloquet {

struct EigenDecomposition {
  Vector values;
  Matrix vectors;  // right eigenvectors as unit columns; empty if not requested
};

// General complex eigenproblem through LAPACK zgeev.
EigenDecomposition eig(const Matrix& a, bool want_vectors);

// Reciprocal 1-norm condition estimate of a square matrix after scaling
// its columns to unit norm.
double rcond_unit_columns(const Matrix& r);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int points = 0;
};

// Ordinary least squares y = intercept + slope * x.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace nufloquet
