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
#include <numbers>
#include <random>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "nufloquet/error.hpp"
#include "nufloquet/floquet.hpp"
#include "nufloquet/gaussian.hpp"
#include "nufloquet/model.hpp"
#include "nufloquet/oracle.hpp"

namespace nufloquet {
namespace {

constexpr double kPi = std::numbers::pi;

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

TEST(MajoranaMatrix, SingleTermCoefficientRule) {
  MajoranaMatrix h(2);
  h.add_term(0, 1, 1.0);
  const Matrix d = h.dense();
  EXPECT_EQ(d(0, 1), cplx(0, 2));
  EXPECT_EQ(d(1, 0), cplx(0, -2));
  EXPECT_EQ(d(0, 0), cplx(0));
  EXPECT_EQ(d(1, 1), cplx(0));
}

TEST(MajoranaMatrix, FromDenseRejectsNonAntisymmetric) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(MajoranaMatrix::from_dense(m), ConfigError);
  m(1, 0) = -1.0;
  EXPECT_NO_THROW(MajoranaMatrix::from_dense(m));
}

TEST(MajoranaMatrix, OccupiedSingleSiteHasPositiveY) {
  // Y = i b a = 2n - 1 on one site, via both engines.
  EXPECT_NEAR(observables(initial_fock_state({true})).y[0], 1.0, 1e-14);
  EXPECT_NEAR(measure(y_fock_state({true})).y[0], 1.0, 1e-14);
  EXPECT_NEAR(measure(y_fock_state({false})).y[0], -1.0, 1e-14);
}

TEST(CanonicalOrdering, IndexMap) {
  EXPECT_EQ(majorana::b(0), 0);
  EXPECT_EQ(majorana::a(0), 1);
  EXPECT_EQ(majorana::b(3), 6);
  EXPECT_EQ(majorana::a(3), 7);
  EXPECT_FALSE(canonical_ordering().empty());
}

TEST(BuildHzz, TwoSiteOpenChainCouplesBToNextA) {
  const Matrix d = build_h_zz(ModelParams::uniform(2, 1.0, 0.0)).dense();
  EXPECT_EQ(d(majorana::b(0), majorana::a(1)), cplx(0, -2));
  EXPECT_EQ(d(majorana::a(1), majorana::b(0)), cplx(0, 2));
  int nonzero = 0;
  for (Eigen::Index i = 0; i < d.size(); ++i) nonzero += d.data()[i] != cplx(0);
  EXPECT_EQ(nonzero, 2);
}

TEST(BuildHzz, ThreeSiteSparsityPattern) {
  const Matrix d = build_h_zz(ModelParams::uniform(3, 1.0, 0.0)).dense();
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      const bool allowed = (i == majorana::b(0) && j == majorana::a(1)) || (j == majorana::b(0) && i == majorana::a(1)) ||
                           (i == majorana::b(1) && j == majorana::a(2)) || (j == majorana::b(1) && i == majorana::a(2));
      if (!allowed) EXPECT_EQ(d(i, j), cplx(0)) << i << "," << j;
    }
}

// Generators carry unit weight; couplings enter through exp_factor weights.
TEST(BuildHxx, TwoSiteOpenChainCouplesAToNextB) {
  ModelParams p = ModelParams::uniform(2, 1.0, 0.0, 0.7);
  const Matrix d = build_h_xx(p).dense();
  EXPECT_EQ(d(majorana::a(0), majorana::b(1)), cplx(0, 2));
  EXPECT_EQ(d(majorana::a(0), majorana::b(1)), -d(majorana::b(1), majorana::a(0)));
}

// Bloch block of a translation-invariant Majorana matrix, read from site `s`.
Eigen::Matrix2cd bloch(const Matrix& h, int L, int s, double k) {
  Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
  for (int r = -1; r <= 1; ++r) {
    const int t = ((s + r) % L + L) % L;
    for (int al = 0; al < 2; ++al)
      for (int be = 0; be < 2; ++be) out(al, be) += h(2 * s + al, 2 * t + be) * std::exp(kI * (k * r));
  }
  return out;
}

TEST(BuildHzz, MomentumBlockIsXxAtOppositeMomentum) {
  const int L = 8;
  ModelParams p = ModelParams::uniform(L, 1.0, 0.0, 1.0, 0.0, Boundary::Periodic);
  const Matrix zz = build_h_zz(p).dense();
  const Matrix xx = build_h_xx(p).dense();
  for (int n = 0; n < L; ++n) {
    const double k = 2 * kPi * n / L;
    EXPECT_LT((bloch(zz, L, 3, k) - bloch(xx, L, 3, -k)).norm(), 1e-13);
  }
}

TEST(BuildHamiltonians, AntisymmetricForAllSmallChains) {
  for (int L = 2; L <= 8; ++L)
    for (Boundary bc : {Boundary::Open, Boundary::Periodic, Boundary::Antiperiodic}) {
      ModelParams p = ModelParams::uniform(L, 0.8, 0.3, 0.4, 0.2, bc);
      for (const Matrix& d : {build_h_zz(p).dense(), build_h_xx(p).dense(), build_h_y(p, 0).matrix.dense()})
        EXPECT_LT(max_abs(d + d.transpose()), 1e-12 * std::max(1.0, max_abs(d)));
    }
}

TEST(ModelParams, ValidateRejectsShapeErrors) {
  ModelParams p = ModelParams::uniform(4, 1.0, 0.2);
  p.j_xx.push_back(0.1);
  EXPECT_THROW(p.validate(), ConfigError);
  ModelParams q = ModelParams::uniform(4, -1.0, 0.2);
  EXPECT_THROW(q.validate(), ConfigError);
}

TEST(ModelParams, JsonRoundTrip) {
  ModelParams p = ModelParams::uniform(5, 1.25, 0.3, 0.2, 0.1, Boundary::Antiperiodic, 0.05);
  p.disorder = {DisorderKind::Stochastic, 0.3, 0.5, 17};
  p.seed = 99;
  const nlohmann::json j = p;
  const ModelParams q = j.get<ModelParams>();
  EXPECT_EQ(q.L, p.L);
  EXPECT_EQ(q.beta, p.beta);
  EXPECT_EQ(q.j_xx, p.j_xx);
  EXPECT_EQ(q.j_yy, p.j_yy);
  EXPECT_EQ(q.bc, p.bc);
  EXPECT_EQ(q.disorder.kind, p.disorder.kind);
  EXPECT_EQ(q.disorder.seed, p.disorder.seed);
  EXPECT_EQ(q.seed, p.seed);
}

TEST(FieldSequence, UniformFieldIsConstant) {
  const auto f = field_sequence(ModelParams::uniform(6, 1.0, 0.37), 3);
  for (double x : f) EXPECT_EQ(x, 0.37);
}

TEST(FieldSequence, QuenchedDisorderIsStepIndependent) {
  ModelParams p = ModelParams::uniform(6, 1.0, 0.0);
  p.disorder = {DisorderKind::Quenched, kPi / 3, 0.4, 5};
  EXPECT_EQ(field_sequence(p, 0), field_sequence(p, 17));
}

TEST(FieldSequence, StochasticDisorderIsReproducibleAndBounded) {
  ModelParams p = ModelParams::uniform(16, 1.0, 0.0);
  p.disorder = {DisorderKind::Stochastic, 1.2, 0.5, 21};
  bool varies = false;
  for (int t = 0; t < 50; ++t) {
    const auto f = field_sequence(p, t);
    EXPECT_EQ(f, field_sequence(p, t));
    for (double x : f) {
      EXPECT_GE(x, 1.2 - 0.5);
      EXPECT_LE(x, 1.2 + 0.5);
    }
    if (t > 0 && f != field_sequence(p, t - 1)) varies = true;
  }
  EXPECT_TRUE(varies);
}

TEST(ExpFactor, ZeroScaleIsIdentity) {
  const FloquetFactor f = exp_factor(build_h_zz(ModelParams::uniform(5, 1.0, 0.0)), 0.0);
  EXPECT_LT(max_abs(f.dense() - Matrix::Identity(10, 10)), 1e-15);
}

TEST(ExpFactor, HalfPiFieldNegatesEveryPair) {
  const DriveFactors f = drive_factors(ModelParams::uniform(4, 0.0, kPi / 2));
  EXPECT_LT(max_abs(f.y.dense() + Matrix::Identity(8, 8)), 1e-14);
}

TEST(ExpFactor, SingleBondMatchesDenseExponential) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    MajoranaMatrix h(4);
    h.add_term(1, 2, cplx(u(rng), u(rng)));
    const cplx scale(u(rng), u(rng));
    const Matrix expected = (scale * h.dense()).exp();
    EXPECT_LT(max_abs(exp_factor(h, scale).dense() - expected), 1e-12 * std::max(1.0, max_abs(expected)));
  }
}

TEST(ExpFactor, InverseUndoesFactor) {
  const DriveFactors f = drive_factors(ModelParams::uniform(5, 1.3, 0.4, 0.2, 0.1));
  for (const FloquetFactor* x : {&f.zz_measure, &f.zz_phase, &f.xx, &f.y})
    EXPECT_LT(max_abs(x->dense() * x->inverse().dense() - Matrix::Identity(10, 10)), 1e-12);
}

TEST(FloquetMatrix, TrivialDriveIsIdentity) {
  EXPECT_LT(max_abs(build_floquet_matrix(ModelParams::uniform(5, 0.0, 0.0)).m - Matrix::Identity(10, 10)), 1e-15);
}

TEST(FloquetMatrix, NoMeasurementIsUnitary) {
  const Matrix v = build_floquet_matrix(ModelParams::uniform(6, 0.0, 0.7, 0.3, 0.5)).m;
  EXPECT_LT(max_abs(v.adjoint() * v - Matrix::Identity(12, 12)), 1e-12);
}

TEST(FloquetMatrix, ComplexOrthogonal) {
  const Matrix v = build_floquet_matrix(ModelParams::uniform(6, 2.0, 0.7, 0.3, 0.5, Boundary::Periodic)).m;
  EXPECT_LT(max_abs(v.transpose() * v - Matrix::Identity(12, 12)), 1e-9 * max_abs(v) * max_abs(v));
}

TEST(FloquetMatrix, BandedMatchesDense) {
  const ModelParams p = ModelParams::uniform(7, 1.1, 0.5, 0.3, 0.2);
  const Matrix v = build_floquet_matrix(p).m;
  const auto banded = build_floquet_banded(p, 0, cplx(0.5));
  for (int i = 0; i < 14; ++i)
    for (int j = 0; j < 14; ++j)
      EXPECT_LT(std::abs(banded.get(i, j) - (v(i, j) + (i == j ? cplx(0.5) : cplx(0)))), 1e-12);
}

TEST(FloquetMatrix, MatchesDenseOracleCorrelationAction) {
  const ModelParams p = ModelParams::uniform(4, 2.0, kPi / 3);
  const std::vector<bool> occ{true, false, true, true};
  const CorrelationState g = step(initial_fock_state(occ), build_floquet_matrix(p));
  const DenseState d = apply_floquet(y_fock_state(occ), p, 0);
  EXPECT_LT(max_abs(measure(d).majorana - g.majorana_correlation()), 1e-10);
}

}  // namespace
}  // namespace nufloquet
