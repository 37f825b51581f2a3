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
#include <optional>
#include <string>
#include <vector>

#include "nufloquet/floquet.hpp"
#include "nufloquet/model.hpp"
#include "nufloquet/types.hpp"

// Pure fermionic Gaussian states in the doubled basis v_c = (c_1..c_L,
// c_1^+..c_L^+). A state is fixed by L annihilators d_j = alpha_j^+ v_c whose
// coefficient vectors alpha_j form the columns of the isometry U.
namespace nufloquet {

// gamma = W v_c with b_j = i (c_j - c_j^+) and a_j = c_j + c_j^+.
Matrix w_map(int L);

class CorrelationState {
 public:
  CorrelationState() = default;
  // Orthonormalizes the columns of `u`. Throws NumericalError("RankCollapse").
  explicit CorrelationState(Matrix u, std::int64_t step = 0);

  // Pure state from a projector C^c (eigenvalues near 0 or 1).
  static CorrelationState from_correlation(const Matrix& cc, std::int64_t step = 0);

  int L() const { return static_cast<int>(u_.cols()); }
  const Matrix& isometry() const { return u_; }
  // C^c = U U^+ = <v_c v_c^+>.
  const Matrix& correlation() const { return c_; }
  // C^m = W C^c W^+ = <gamma gamma^T>.
  Matrix majorana_correlation() const;
  std::int64_t step() const { return step_; }
  void set_step(std::int64_t s) { step_ = s; }

 private:
  Matrix u_;
  Matrix c_;
  std::int64_t step_ = 0;
};

// Annihilator c_j for empty sites and c_j^+ for occupied ones.
CorrelationState initial_fock_state(const std::vector<bool>& occupied);
// (-1)^{number of empty sites}, the eigenvalue of prod_j Y_j.
int fock_parity(const std::vector<bool>& occupied);

// One period in the c-basis, U -> (V_c^{-1})^+ U with V_c = W^+ V W / 2.
class Propagator {
 public:
  explicit Propagator(const FloquetMatrix& v);
  const Matrix& map() const { return map_; }

 private:
  Matrix map_;
};

// Throws NumericalError("RankCollapse") when the propagated columns lose rank
// (smallest pivot below 1e-13 of the largest). When |U^T S U| exceeds 1e-11
// the state is projected back to C = 1 - S C^T S before returning.
CorrelationState step(const CorrelationState& state, const Propagator& prop);
CorrelationState step(const CorrelationState& state, const FloquetMatrix& v);

// Period-by-period evolution that rebuilds the Floquet matrix when the fields
// change from step to step (stochastic disorder).
class Evolution {
 public:
  explicit Evolution(ModelParams p);
  CorrelationState advance(const CorrelationState& state) const;
  bool time_dependent() const { return time_dependent_; }

 private:
  ModelParams params_;
  bool time_dependent_ = false;
  std::optional<Propagator> fixed_;
};

struct ConvergenceOptions {
  double tol = 1e-10;  // ||C(t+2) - C(t)||_F
  int consecutive = 5;
  std::int64_t max_steps = 100000;
};

struct ConvergedRun {
  CorrelationState state;
  std::int64_t steps = 0;
  bool converged = false;
  double last_change = 0.0;
};

ConvergedRun evolve_until_converged(const CorrelationState& start, const Propagator& prop,
                                    const ConvergenceOptions& opt = {});

// ----- correlation-matrix ODE for the imaginary factor -----

// Sign s of the cubic term in dG/dx = {H_I, G} + 2 s G H_I G, G = C^m / 2,
// H_I = -h for the factor exp(x * (1/4) gamma^T h gamma).
inline constexpr int kOdeCubicSign = -1;

struct OdeOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  double min_step = 1e-14;
  int cubic_sign = kOdeCubicSign;
};

// Integrates C^m under exp(x * (1/4) gamma^T h gamma) for x in [0, duration]
// with an adaptive Dormand-Prince pair. Throws NumericalError("StepSizeUnderflow").
Matrix evolve_majorana_ode(const Matrix& cm, const MajoranaMatrix& h, double duration, const OdeOptions& opt = {});
CorrelationState evolve_ode(const CorrelationState& state, const MajoranaMatrix& h, double duration,
                            const OdeOptions& opt = {});

// One period with the unitary factors applied exactly and the measurement
// factor integrated by the ODE.
CorrelationState step_ode(const CorrelationState& state, const ModelParams& p, std::int64_t step = 0,
                          const OdeOptions& opt = {});

struct CubicSignReport {
  int printed_sign = +1;
  int chosen_sign = kOdeCubicSign;
  double error_plus = 0.0;   // max |C^m_ode - C^m_oracle| with s = +1
  double error_minus = 0.0;  // same with s = -1
  int L = 4;
  double beta = 0.0;
  bool consistent = false;  // chosen sign is the one with the smaller error
};

// Runs both signs against the exact state-vector evolution at L = 4.
CubicSignReport resolve_cubic_sign(double beta = 1.0, double h_y = 0.4);

// ----- steady states -----

// Fills the modes with Im eps > 0. `i0_choice[k]` picks, for the k-th mid-gap
// pair (in spectrum order), the representative (0) or its partner (1).
// Throws NumericalError("DegenerateImaginaryPart") when a mid-gap pair is left
// unresolved.
CorrelationState steady_state(const QuasiSpectrum& s, const std::vector<int>& i0_choice = {});
// Every choice of mid-gap occupations (at most 2^4 states).
std::vector<CorrelationState> steady_states(const QuasiSpectrum& s);
// Steady state in a fixed parity sector: the pair with the smallest |Im eps|
// is flipped when the default filling has the other parity.
CorrelationState steady_state_in_sector(const QuasiSpectrum& s, int parity);

// ----- observables -----

struct Observables {
  std::vector<double> y;     // <Y_j>
  std::vector<double> zz;    // <Z_j Z_{j+1}>, j = 0..L-2
  double parity = 0.0;       // <prod_j Y_j>
};

Observables observables(const CorrelationState& state);
// <Z_j Z_k>, j < k, through the Pfaffian of the connected correlations.
cplx string_correlator(const CorrelationState& state, int j, int k);
cplx string_correlator(const Matrix& majorana_corr, int j, int k);
// i^L Pf(C^m - 1).
cplx parity_expectation(const Matrix& majorana_corr);

// Throws ConfigError("OddDimension") or ConfigError("NotAntisymmetric").
cplx pfaffian(const Matrix& a, double antisymmetry_tol = 1e-10);

// |<psi_1|psi_2>| = |det(U_1^+ U_2)|^(1/2).
double overlap_magnitude(const CorrelationState& s1, const CorrelationState& s2);

// Von Neumann entropy (nats) of sites 0 .. cut-1.
double entanglement_entropy(const CorrelationState& state, int cut);
std::vector<double> entropy_profile(const CorrelationState& state);

struct InvariantDefects {
  double isometry = 0.0;        // ||U^+U - 1||_max
  double idempotency = 0.0;     // ||C^2 - C||_max
  double trace = 0.0;           // |tr C - L|
  double particle_hole = 0.0;   // ||S C^T S - (1 - C)||_max
  double hermiticity = 0.0;
  double max() const;
};

InvariantDefects check_invariants(const CorrelationState& state);

}  // namespace nufloquet
