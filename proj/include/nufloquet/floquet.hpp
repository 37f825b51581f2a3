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
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nufloquet/banded.hpp"
#include "nufloquet/linalg.hpp"
#include "nufloquet/model.hpp"
#include "nufloquet/types.hpp"

namespace nufloquet {

// exp([[0, x], [-x, 0]]) acting on Majorana indices (p, q).
struct Rotation {
  int p;
  int q;
  cplx angle;
  cplx c;
  cplx s;
};

// Product of commuting 2x2 rotations on disjoint index pairs.
class FloquetFactor {
 public:
  FloquetFactor() = default;
  FloquetFactor(int dim, std::vector<Rotation> blocks) : dim_(dim), blocks_(std::move(blocks)) {}

  int dim() const { return dim_; }
  const std::vector<Rotation>& blocks() const { return blocks_; }

  Matrix dense() const;
  FloquetFactor inverse() const;
  void apply_left(Matrix& m) const;   // m <- F m
  void apply_right(Matrix& m) const;  // m <- m F
  void apply_left(BandedMatrix<cplx>& m) const;

 private:
  int dim_ = 0;
  std::vector<Rotation> blocks_;
};

// exp(scale * sum_b weight_b * H_b) for a matrix whose entries touch disjoint
// index pairs. Empty weights mean unit weights; otherwise one weight per entry
// in builder order. Throws ConfigError("OverlappingBonds").
FloquetFactor exp_factor(const MajoranaMatrix& h, cplx scale, const std::vector<double>& weights = {});

// The four factors of one period, V = zz_measure * zz_phase * xx * y.
struct DriveFactors {
  FloquetFactor zz_measure;
  FloquetFactor zz_phase;
  FloquetFactor xx;
  FloquetFactor y;
};

// Throws ConfigError("UnsupportedCouplings") when YY couplings are present.
DriveFactors drive_factors(const ModelParams& p, std::int64_t step = 0);

struct FloquetMatrix {
  Matrix m;
  int L() const { return static_cast<int>(m.rows() / 2); }
};

FloquetMatrix build_floquet_matrix(const ModelParams& p, std::int64_t step = 0);

// Banded single-particle matrix V + shift for open chains (band width 5).
BandedMatrix<cplx> build_floquet_banded(const ModelParams& p, std::int64_t step, cplx shift);

struct SpectrumOptions {
  bool vectors = true;
  double pair_tol = 1e-6;
  double gap_tol = 1e-3;
  double branch_tol = 1e-6;
  double degeneracy_tol = 1e-9;
  bool check_condition = true;
  double condition_limit = 1e10;
};

struct QuasiSpectrum {
  int L = 0;
  // One representative per +-pair, descending imaginary part.
  std::vector<cplx> eps;
  // Raw eigenvalues m of V in solver order and their principal quasi-energies.
  std::vector<cplx> raw;
  std::vector<cplx> raw_eps;
  // Raw indices of the representative and its partner for every pair.
  std::vector<int> plus;
  std::vector<int> minus;
  std::vector<char> mid_gap;
  std::vector<char> half_pi;
  int half_pi_count = 0;
  // Columns in raw order; left.col(k)^T right.col(k) = 1. Empty without vectors.
  Matrix right;
  Matrix left;
  double rcond = 1.0;
};

// Throws NumericalError("PairingFailed") or NumericalError("IllConditioned").
QuasiSpectrum quasi_energies(const FloquetMatrix& v, const SpectrumOptions& opt = {});

// Wraps the real part of a quasi-energy into [-pi/2, pi/2).
cplx wrap_quasi_energy(cplx eps);

// The two particle-hole partners at momentum k, J = 0 and uniform couplings.
std::pair<cplx, cplx> analytic_spectrum(double beta, double h_y, double k);

// Allowed momenta for a closed chain of L sites.
std::vector<double> momentum_grid(int L, Boundary bc);

enum class Phase { Oscillatory, TrivialDegenerate, Gapless };
std::string to_string(Phase phase);

struct PhaseTolerances {
  double gap_tol = 1e-3;
  double split_tol = 1e-2;
};

struct PhaseEvidence {
  Phase phase = Phase::Gapless;
  double im_gap = 0.0;
  double re_splitting = 0.0;
};

// Sign of cosh(2 beta) cos(2 h) against +-1.
Phase classify_phase(double beta, double h_y);

// Numerical classification from an open-chain spectrum. The bulk gap is read
// from `bulk` when given (typically a closed chain), otherwise from the open
// chain with its smallest pair removed. Throws AmbiguousClassification.
PhaseEvidence classify_phase(const QuasiSpectrum& open_chain, const QuasiSpectrum* bulk,
                             const PhaseTolerances& tol = {});

struct HamiltonianDiagonalization {
  // lambda_j chosen with positive real part, or positive imaginary part when
  // purely imaginary; ordered by descending imaginary part.
  std::vector<cplx> lambda;
  // Columns v_{2j-1}, v_{2j} (0-based 2j, 2j+1) for +lambda_j and -lambda_j,
  // normalized so that v_{2j-1}^T v_{2j} = 1.
  Matrix v;
  // Complex orthogonal, X^T H X = block diag [[0, i lambda], [-i lambda, 0]].
  Matrix x;
  // Quasi-energies eps = lambda / 2, as for V = exp(-i H).
  QuasiSpectrum spectrum;
};

// Throws ConfigError("NonAntisymmetricInput") or NumericalError("DegeneracyRepairFailed").
HamiltonianDiagonalization diagonalize_hamiltonian(const MajoranaMatrix& h, const SpectrumOptions& opt = {});

// H_F with V = exp(-i H_F), assembled from a spectrum with vectors.
Matrix floquet_hamiltonian(const QuasiSpectrum& s);

enum class SplittingMethod { Dense, Extended };

struct SplittingPoint {
  int L = 0;
  double min_im = 0.0;
  std::string method;
};

struct SplittingScan {
  std::vector<SplittingPoint> points;
  LinearFit exponential_fit;  // ln(min_im) against L
  LinearFit power_fit;        // ln(min_im) against ln L
  bool exponential = false;
};

// Smallest |Im eps| of the mid-gap pair for every L, open chains.
// Dense values under `extended_below` are recomputed in extended precision.
SplittingScan finite_size_splitting(const ModelParams& base, const std::vector<int>& sizes,
                                    double extended_below = 1e-6);

}  // namespace nufloquet
