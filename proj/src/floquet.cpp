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

#include "nufloquet/floquet.hpp"

#include "nufloquet/error.hpp"

namespace nufloquet {

Matrix FloquetFactor::dense() const {
  Matrix m = Matrix::Identity(dim_, dim_);
  for (const auto& r : blocks_) {
    m(r.p, r.p) = r.c;
    m(r.p, r.q) = r.s;
    m(r.q, r.p) = -r.s;
    m(r.q, r.q) = r.c;
  }
  return m;
}

FloquetFactor FloquetFactor::inverse() const {
  std::vector<Rotation> inv = blocks_;
  for (auto& r : inv) {
    r.angle = -r.angle;
    r.s = -r.s;
  }
  return FloquetFactor(dim_, std::move(inv));
}

void FloquetFactor::apply_left(Matrix& m) const {
  for (const auto& r : blocks_) {
    const Eigen::RowVectorXcd rp = m.row(r.p);
    const Eigen::RowVectorXcd rq = m.row(r.q);
    m.row(r.p) = r.c * rp + r.s * rq;
    m.row(r.q) = r.c * rq - r.s * rp;
  }
}

void FloquetFactor::apply_right(Matrix& m) const {
  for (const auto& r : blocks_) {
    const Vector cp = m.col(r.p);
    const Vector cq = m.col(r.q);
    m.col(r.p) = r.c * cp - r.s * cq;
    m.col(r.q) = r.s * cp + r.c * cq;
  }
}

void FloquetFactor::apply_left(BandedMatrix<cplx>& m) const {
  for (const auto& r : blocks_) m.mix_rows(r.p, r.q, r.c, r.s);
}

FloquetFactor exp_factor(const MajoranaMatrix& h, cplx scale, const std::vector<double>& weights) {
  const auto& entries = h.entries();
  if (!weights.empty() && weights.size() != entries.size())
    throw ConfigError("InvalidParams", "exp_factor needs one weight per bond (" + std::to_string(entries.size()) +
                                           "), got " + std::to_string(weights.size()));
  std::vector<char> used(h.dim(), 0);
  std::vector<Rotation> blocks;
  blocks.reserve(entries.size());
  for (std::size_t n = 0; n < entries.size(); ++n) {
    const auto& e = entries[n];
    if (used[e.row] || used[e.col])
      throw ConfigError("OverlappingBonds", "Majorana index " + std::to_string(used[e.row] ? e.row : e.col) +
                                                " appears in more than one bond");
    used[e.row] = used[e.col] = 1;
    const double w = weights.empty() ? 1.0 : weights[n];
    const cplx x = scale * w * e.value;
    blocks.push_back({e.row, e.col, x, std::cos(x), std::sin(x)});
  }
  return FloquetFactor(h.dim(), std::move(blocks));
}

DriveFactors drive_factors(const ModelParams& p, std::int64_t step) {
  p.validate();
  if (p.has_yy())
    throw ConfigError("UnsupportedCouplings", "YY interactions are not quadratic; use the exact engine");
  const MajoranaMatrix hzz = build_h_zz(p);
  const MajoranaMatrix hxx = build_h_xx(p);
  const FieldTerm hy = build_h_y(p, step);
  DriveFactors f;
  f.zz_measure = exp_factor(hzz, p.beta);
  f.zz_phase = exp_factor(hzz, -kI, p.j_zz);
  f.xx = exp_factor(hxx, -kI, p.j_xx);
  f.y = exp_factor(hy.matrix, -kI, hy.fields);
  return f;
}

FloquetMatrix build_floquet_matrix(const ModelParams& p, std::int64_t step) {
  const DriveFactors f = drive_factors(p, step);
  const int n = 2 * p.L;
  FloquetMatrix v{Matrix::Identity(n, n)};
  f.y.apply_left(v.m);
  f.xx.apply_left(v.m);
  f.zz_phase.apply_left(v.m);
  f.zz_measure.apply_left(v.m);
  return v;
}

BandedMatrix<cplx> build_floquet_banded(const ModelParams& p, std::int64_t step, cplx shift) {
  if (p.closed()) throw ConfigError("InvalidBoundary", "banded Floquet matrix needs an open chain");
  const DriveFactors f = drive_factors(p, step);
  auto m = BandedMatrix<cplx>::identity(2 * p.L, 5, 5);
  f.y.apply_left(m);
  f.xx.apply_left(m);
  f.zz_phase.apply_left(m);
  f.zz_measure.apply_left(m);
  m.add_identity(shift);
  return m;
}

}  // namespace nufloquet
