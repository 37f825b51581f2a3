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

#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "nufloquet/edge_modes.hpp"
#include "nufloquet/error.hpp"
#include "nufloquet/floquet.hpp"
#include "nufloquet/gaussian.hpp"
#include "nufloquet/oracle.hpp"

namespace nufloquet {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Oracle, SizeLimit) {
  EXPECT_NO_THROW(check_oracle_size(kMaxOracleSites));
  EXPECT_THROW(check_oracle_size(kMaxOracleSites + 1), ConfigError);
}

TEST(Oracle, AllUpState) {
  const Measurement m = measure(z_product_state(std::vector<bool>(5, false)), false);
  for (double z : m.z) EXPECT_NEAR(z, 1.0, 1e-15);
  for (int j = 0; j < 5; ++j)
    for (int k = j + 1; k < 5; ++k) EXPECT_NEAR(m.zz(j, k).real(), 1.0, 1e-15);
}

TEST(Oracle, FockParityIsProductOfOccupations) {
  const std::vector<bool> occ{true, false, false, true, false};
  double expected = 1.0;
  for (bool n : occ) expected *= n ? 1.0 : -1.0;
  EXPECT_NEAR(measure(y_fock_state(occ), false).parity, expected, 1e-14);
  EXPECT_EQ(fock_parity(occ), static_cast<int>(expected));
}

TEST(Oracle, MajoranaStringsAnticommute) {
  const int L = 4;
  for (int mu = 0; mu < 2 * L; ++mu)
    for (int nu = 0; nu < 2 * L; ++nu) {
      const DenseState s = y_fock_state({true, false, true, false});
      Vector v = apply_pauli(apply_pauli(s.amp, majorana_string(L, nu)), majorana_string(L, mu));
      v += apply_pauli(apply_pauli(s.amp, majorana_string(L, mu)), majorana_string(L, nu));
      const double expected = mu == nu ? 2.0 : 0.0;
      EXPECT_NEAR((v - expected * s.amp).norm(), 0.0, 1e-14) << mu << " " << nu;
    }
}

TEST(Oracle, TrivialDriveLeavesStateUnchanged) {
  const DenseState s = z_product_state({true, false, true, true, false});
  const DenseState t = apply_floquet(s, ModelParams::uniform(5, 0.0, 0.0), 0);
  EXPECT_LT((t.amp - s.amp).norm(), 1e-15);
}

TEST(Oracle, UnitNormAfterEveryStep) {
  const ModelParams p = ModelParams::uniform(6, 2.0, 1.2, 0.3, 0.0, Boundary::Open, 0.3);
  DenseState s = z_product_state({true, false, true, true, false, false});
  for (int t = 0; t < 20; ++t) {
    s = apply_floquet(s, p, t);
    EXPECT_NEAR(s.amp.norm(), 1.0, 1e-13);
  }
}

TEST(Oracle, StrongMeasurementProducesCatStates) {
  const int L = 6;
  const ModelParams p = ModelParams::uniform(L, 4.0, kPi / 2 - 0.02);
  const int all_down = (1 << L) - 1;
  // The top two eigenvectors are (|up...> +- i^L |down...>)/sqrt 2.
  const ManyBodySpectrum spec = spectral_decompose(p);
  for (int n = 0; n < 2; ++n) {
    const Vector v = spec.vectors.col(n).normalized();
    EXPECT_NEAR(std::norm(v[0]), 0.5, 0.02);
    EXPECT_NEAR(std::norm(v[all_down]), 0.5, 0.02);
  }
  // Starting from all up, the stroboscopic state stays in their span.
  DenseState s = z_product_state(std::vector<bool>(L, false));
  for (int t = 0; t < 40; ++t) s = apply_floquet(s, p, t);
  EXPECT_GT(std::norm(s.amp[0]) + std::norm(s.amp[all_down]), 0.95);
}

TEST(Oracle, MatchesGaussianEngineAfterThirtySteps) {
  const ModelParams p = ModelParams::uniform(6, 2.0, kPi / 3, 0.2);
  const std::vector<bool> occ{true, false, true, true, false, false};
  const Propagator prop(build_floquet_matrix(p));
  CorrelationState g = initial_fock_state(occ);
  DenseState d = y_fock_state(occ);
  for (int t = 0; t < 30; ++t) {
    g = step(g, prop);
    d = apply_floquet(d, p, t);
  }
  EXPECT_LT((measure(d).majorana - g.majorana_correlation()).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Oracle, YyAfterAndBeforeXxDiffer) {
  ModelParams p = ModelParams::uniform(4, 1.0, 0.7, 0.3, 0.0, Boundary::Open, 0.4);
  const DenseState s = z_product_state({true, false, false, true});
  const DenseState a = apply_floquet(s, p, 0);
  p.yy_placement = YYPlacement::BeforeXX;
  const DenseState b = apply_floquet(s, p, 0);
  EXPECT_NEAR(std::abs(a.amp.dot(a.amp)), 1.0, 1e-14);
  EXPECT_GT((a.amp - b.amp).norm(), 1e-6);
}

// Largest mismatch between the eigenvalues and the products after fixing the
// global factor on the best anchor.
double product_mismatch(const ManyBodySpectrum& spec, const std::vector<cplx>& raw) {
  double best = INFINITY;
  for (cplx anchor : raw) {
    const cplx scale = spec.values.front() / anchor;
    double worst = 0.0;
    for (cplx v : spec.values) {
      double d = INFINITY;
      for (cplx q : raw) d = std::min(d, std::abs(v - scale * q));
      worst = std::max(worst, d / std::abs(v));
    }
    best = std::min(best, worst);
  }
  return best;
}

TEST(ManyBody, UnitaryTwoSiteProductsMatch) {
  const ModelParams p = ModelParams::uniform(2, 0.0, kPi / 4);
  const ManyBodySpectrum spec = spectral_decompose(p);
  ASSERT_EQ(spec.values.size(), 4u);
  for (cplx v : spec.values) EXPECT_NEAR(std::abs(v), 1.0, 1e-12);
  const auto products = free_fermion_products(quasi_energies(build_floquet_matrix(p)), 1.0);
  EXPECT_LT(product_mismatch(spec, products), 1e-10);
}

TEST(ManyBody, ProductsReproduceEigenvalues) {
  const ModelParams p = ModelParams::uniform(6, 1.0, 1.1, 0.3);
  const ManyBodySpectrum spec = spectral_decompose(p);
  const auto products = free_fermion_products(quasi_energies(build_floquet_matrix(p)), spec.values.front());
  for (cplx v : spec.values) {
    double best = INFINITY;
    for (cplx q : products) best = std::min(best, std::abs(v - q) / std::abs(v));
    EXPECT_LT(best, 1e-8);
  }
}

// Ratio lambda_0 / lambda_1 predicted by flipping the mid-gap mode.
cplx mid_gap_ratio(const ModelParams& p) {
  const QuasiSpectrum s = quasi_energies(build_floquet_matrix(p));
  cplx mid = s.eps.front();
  for (cplx e : s.eps)
    if (std::abs(e.imag()) < std::abs(mid.imag())) mid = e;
  const cplx m = std::exp(-2.0 * kI * mid);
  return std::abs(m) >= 1.0 ? m : 1.0 / m;
}

TEST(ManyBody, OscillatoryTopPairHasOppositeParityAndSign) {
  std::vector<double> split;
  for (int L : {4, 6, 8}) {
    const ModelParams p = ModelParams::uniform(L, 2.0, kPi / 3);
    const ManyBodySpectrum spec = spectral_decompose(p);
    EXPECT_NEAR(spec.parity[0] * spec.parity[1], -1.0, 1e-8);
    const cplx ratio = spec.values[0] / spec.values[1];
    EXPECT_LT(std::abs(ratio - mid_gap_ratio(p)), 1e-8);
    EXPECT_LT(ratio.real(), 0.0);
    EXPECT_LT(std::abs(spec.values[2]), 0.5 * std::abs(spec.values[1]));
    split.push_back(std::abs(ratio) - 1.0);
  }
  // Two more sites shrink the splitting by the squared edge-mode decay factor.
  const double decay = std::norm(transfer_matrix(2.0, kPi / 3).eigenvalues[0]);
  EXPECT_NEAR(split[1] / split[0], decay, 0.15 * decay);
  EXPECT_NEAR(split[2] / split[1], decay, 0.15 * decay);
}

TEST(ManyBody, TrivialTopPairIsDegenerateWithoutSignFlip) {
  std::vector<double> split;
  for (int L : {4, 6, 8}) {
    const ModelParams p = ModelParams::uniform(L, 2.0, kPi / 6);
    const ManyBodySpectrum spec = spectral_decompose(p);
    const cplx ratio = spec.values[0] / spec.values[1];
    EXPECT_LT(std::abs(ratio - mid_gap_ratio(p)), 1e-8);
    EXPECT_GT(ratio.real(), 0.0);
    split.push_back(std::abs(ratio - 1.0));
  }
  EXPECT_LT(split[2], 0.25 * split[0]);
}

TEST(ManyBody, SizeLimit) { EXPECT_THROW(spectral_decompose(ModelParams::uniform(9, 1.0, 0.5)), ConfigError); }

}  // namespace
}  // namespace nufloquet
