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

#include <cstdint>
#include <string>
#include <vector>

#include "nufloquet/floquet.hpp"
#include "nufloquet/model.hpp"
#include "nufloquet/types.hpp"

// Dense 2^L state vectors of the spin chain. Basis index bit (L - 1 - j)
// holds site j, 0 for spin up. Closed chains add the bond (L-1, 0); with
// antiperiodic boundaries its XX, YY and ZZ couplings change sign.
namespace nufloquet {

inline constexpr int kMaxOracleSites = 14;

struct DenseState {
  int L = 0;
  Vector amp;
};

// Throws ConfigError("SizeExceeded") above kMaxOracleSites.
void check_oracle_size(int L, int limit = kMaxOracleSites);

// `down[j]` true for spin down at site j.
DenseState z_product_state(const std::vector<bool>& down);
// Product of |+y> (occupied) and |-y> (empty), |+-y> = (|up> +- i|down>)/sqrt 2.
DenseState y_fock_state(const std::vector<bool>& occupied);

// One normalized period. Factors act right to left as Y rotations, XX, YY,
// ZZ phase, exp(beta sum ZZ).
DenseState apply_floquet(const DenseState& state, const ModelParams& p, std::int64_t step);
// The same product without normalization.
void apply_floquet_unnormalized(Vector& amp, const ModelParams& p, std::int64_t step);
// Only the measurement factor exp(beta sum ZZ), normalized.
DenseState apply_zz_measure(const DenseState& state, const ModelParams& p);

// Pauli string with x/z masks over basis bits: P|b> = i^{n_y} (-1)^{|b & z|} |b ^ x>.
struct PauliString {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  int n_y = 0;
};

PauliString majorana_string(int L, int index);
Vector apply_pauli(const Vector& amp, const PauliString& p);
cplx expectation(const DenseState& state, const PauliString& p);

struct Measurement {
  std::vector<double> z;  // <Z_j>
  std::vector<double> y;  // <Y_j>
  Matrix zz;              // <Z_j Z_k>, real part
  double parity = 0.0;    // <prod_j Y_j>
  Matrix majorana;        // <gamma_mu gamma_nu>, canonical ordering
};

Measurement measure(const DenseState& state, bool with_majorana = true);
double mean_z(const DenseState& state);
// Von Neumann entropy (nats) of sites 0 .. cut-1 from the Schmidt values.
double oracle_entropy(const DenseState& state, int cut);
// |<a|b>| for normalized states.
double oracle_overlap(const DenseState& a, const DenseState& b);

struct ManyBodySpectrum {
  std::vector<cplx> values;    // descending magnitude
  std::vector<double> parity;  // <prod Y> of each eigenvector
  Matrix vectors;              // columns match `values`
};

// Dense eigendecomposition of V for L <= 8. Throws ConfigError("SizeExceeded").
ManyBodySpectrum spectral_decompose(const ModelParams& p, std::int64_t step = 0);

// The 2^L products prod_j m_j^{s_j} of single-particle eigenvalue choices
// (one per pair, s_j in {0, 1}, representative m when s_j = 1), rescaled so
// that the largest matches `top`.
std::vector<cplx> free_fermion_products(const QuasiSpectrum& s, cplx top);

// Top eigenvector of V in a parity sector (+1 or -1), normalized.
DenseState oracle_steady_state(const ManyBodySpectrum& spec, int parity);

}  // namespace nufloquet
