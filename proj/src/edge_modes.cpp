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

#include "nufloquet/edge_modes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "nufloquet/detail/assembly.hpp"
#include "nufloquet/error.hpp"
#include "nufloquet/precise.hpp"

namespace nufloquet {

namespace {

double default_tol(int L, double tol) { return tol < 0 ? 1e-6 * 2.0 * L : tol; }

std::vector<cplx> to_std(const Vector& v) { return std::vector<cplx>(v.data(), v.data() + v.size()); }

Vector from_std(const std::vector<cplx>& v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

Vector coefficient_to_canonical(const Vector& coeffs) {
  const auto perm = detail::coefficient_order(static_cast<int>(coeffs.size()));
  Vector canon(coeffs.size());
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) canon[perm[k]] = coeffs[k];
  return canon;
}

// Normalizes, fixes the global phase and stores in coefficient order.
EdgeMode make_mode(Vector canon, ModeSide side, int sign) {
  canon.normalize();
  Eigen::Index big = 0;
  canon.cwiseAbs().maxCoeff(&big);
  canon *= std::conj(canon[big]) / std::abs(canon[big]);
  canon[big] = std::abs(canon[big]);
  const auto perm = detail::coefficient_order(static_cast<int>(canon.size()));
  EdgeMode mode;
  mode.coeffs.resize(canon.size());
  for (Eigen::Index k = 0; k < canon.size(); ++k) mode.coeffs[k] = canon[perm[k]];
  mode.side = side;
  mode.sign = sign;
  mode.defect = std::numeric_limits<double>::quiet_NaN();
  return mode;
}

// The unit vector in span(cols) with the most weight on one half of the chain.
Vector localize(const Matrix& cols, ModeSide side) {
  if (cols.cols() == 1) return cols.col(0);
  const Eigen::HouseholderQR<Matrix> qr(cols);
  const Matrix q = qr.householderQ() * Matrix::Identity(cols.rows(), cols.cols());
  const Eigen::Index n = q.rows();
  const Eigen::Index half = (n / 2) / 2 * 2;  // first index of the right half, site aligned
  Matrix w = Matrix::Zero(q.cols(), q.cols());
  if (side == ModeSide::Left)
    w = q.topRows(half).adjoint() * q.topRows(half);
  else
    w = q.bottomRows(n - half).adjoint() * q.bottomRows(n - half);
  const Eigen::SelfAdjointEigenSolver<Matrix> es(w);
  return q * es.eigenvectors().col(q.cols() - 1);
}

double banded_defect(const ModelParams& p, const Vector& canon, int sign) {
  const auto a = build_floquet_banded(p, 0, cplx(-sign));
  return from_std(a.multiply(to_std(canon))).norm();
}

[[noreturn]] void no_candidate(int sign, double distance, double tol) {
  std::ostringstream msg;
  msg << "no eigenvalue of V near " << sign << ": closest distance " << distance << " exceeds " << tol;
  throw NumericalError("NoCandidateMode", msg.str());
}

// Kernel of a banded operator by block inverse iteration. Returns up to two
// residual-checked vectors in the operator's own ordering.
Matrix banded_kernel(const BandedMatrix<cplx>& a, double tol, double* closest) {
  const auto ritz = smallest_two_eigenpairs(a, 1e-300, 60, 1e-12);
  std::vector<Vector> keep;
  *closest = std::numeric_limits<double>::infinity();
  for (int r = 0; r < 2; ++r) {
    const Vector x = from_std(ritz.vectors[r]);
    const double res = from_std(a.multiply(ritz.vectors[r])).norm() / x.norm();
    *closest = std::min(*closest, res);
    if (res < tol) keep.push_back(x);
  }
  Matrix out(a.size(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = keep[k];
  return out;
}

}  // namespace

std::string to_string(ModeSide side) { return side == ModeSide::Left ? "left" : "right"; }

Vector EdgeMode::canonical() const { return coefficient_to_canonical(coeffs); }

std::vector<double> EdgeMode::pair_norms() const {
  std::vector<double> out(static_cast<std::size_t>(L()));
  for (int s = 0; s < L(); ++s) out[s] = std::hypot(std::abs(coeffs[2 * s]), std::abs(coeffs[2 * s + 1]));
  return out;
}

TransferMatrix transfer_matrix(double beta, double h_y) {
  const cplx a1 = std::cos(2 * h_y);
  const cplx a2 = std::sin(2 * h_y);
  const cplx a3 = std::cosh(2 * beta);
  const cplx a4 = kI * std::sinh(2 * beta);
  if (std::abs(a2) < 1e-14 || std::abs(a4) < 1e-14)
    throw ConfigError("SingularParameters", "sin(2h) and sinh(2 beta) must be nonzero");
  TransferMatrix t;
  t.alphas = {a1, a2, a3, a4};
  const cplx s = a1 + a3;
  t.entries << -(s * s + a4 * a4) / (a4 * a2), -s / a4, -s / a4, -a2 / a4;
  const cplx l1 = kI / (std::tan(h_y) * std::tanh(beta));
  t.eigenvalues = {l1, 1.0 / l1};
  return t;
}

EdgeMode analytic_edge_mode(double beta, double h_y, int L, ModeSide side) {
  if (L < 2) throw ConfigError("InvalidParams", "edge mode needs L >= 2");
  const TransferMatrix t = transfer_matrix(beta, h_y);
  const cplx lam = t.eigenvalues[0];
  if (!(std::abs(lam) < 1.0)) {
    std::ostringstream msg;
    msg << "|lambda_1| = " << std::abs(lam) << " >= 1, the mode is not localized";
    throw NumericalError("NotLocalized", msg.str());
  }
  const double c = std::cos(h_y), s = std::sin(h_y);
  Vector canon(2 * L);
  cplx power = 1.0;
  for (int k = 0; k < L; ++k) {
    // Left: (v_b, v_a) at site k is lambda^k (cos h, sin h); the right mode is
    // the mirror image with (sin h, -cos h).
    const int site = side == ModeSide::Left ? k : L - 1 - k;
    const cplx vb = side == ModeSide::Left ? power * c : power * s;
    const cplx va = side == ModeSide::Left ? power * s : -power * c;
    canon[majorana::b(site)] = vb;
    canon[majorana::a(site)] = va;
    power *= lam;
  }
  EdgeMode mode = make_mode(canon, side, kAnticommuting);
  const ModelParams p = ModelParams::uniform(L, beta, h_y);
  mode.defect = banded_defect(p, mode.canonical(), kAnticommuting);
  return mode;
}

BandedMatrix<cplx> boundary_matrix_m(const ModelParams& p, int sign) {
  if (p.closed()) throw ConfigError("InvalidBoundary", "boundary equations are built for open chains");
  if (p.has_zz_phase() || p.has_yy())
    throw ConfigError("UnsupportedCouplings", "boundary equations need J_zz = J_yy = 0");
  if (sign != 1 && sign != -1) throw ConfigError("InvalidParams", "sign must be +1 or -1");
  return detail::boundary_matrix<cplx>(drive_factors(p, 0), 2 * p.L, -sign);
}

BoundaryEigenvalue boundary_smallest_eigenvalue(const ModelParams& p, int sign) {
  const auto m = boundary_matrix_m(p, sign);
  const int n = m.size();
  Matrix dense = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = m.col_begin(i); j <= m.col_end(i); ++j) dense(i, j) = m.at(i, j);
  const double scale = dense.norm();
  const EigenDecomposition ed = eig(dense, false);
  const double smallest = ed.values.cwiseAbs().minCoeff();
  BoundaryEigenvalue out;
  if (smallest > 1e-8 * scale) {
    out.min_abs = smallest;
    out.log10_min_abs = std::log10(smallest);
    out.method = "dense";
    return out;
  }
  const ExtendedResult r = extended_boundary_smallest(p, -sign);
  out.log10_min_abs = r.log10_min_abs;
  out.min_abs = std::pow(10.0, r.log10_min_abs);
  out.method = "extended-" + std::to_string(r.digits);
  return out;
}

EdgeMode boundary_kernel_mode(const ModelParams& p, int sign, ModeSide side, double defect_tol) {
  const double tol = default_tol(p.L, defect_tol);
  const auto m = boundary_matrix_m(p, sign);
  double closest = 0.0;
  const Matrix kernel = banded_kernel(m, tol, &closest);
  if (kernel.cols() == 0) no_candidate(sign, closest, tol);
  Matrix canon(kernel.rows(), kernel.cols());
  for (Eigen::Index c = 0; c < kernel.cols(); ++c) canon.col(c) = coefficient_to_canonical(kernel.col(c));
  EdgeMode mode = make_mode(localize(canon, side), side, sign);
  mode.defect = banded_defect(p, mode.canonical(), sign);
  return mode;
}

EdgeMode floquet_kernel_mode(const FloquetMatrix& v, int sign, ModeSide side, double defect_tol) {
  if (sign != 1 && sign != -1) throw ConfigError("InvalidParams", "sign must be +1 or -1");
  const int L = v.L();
  const double tol = default_tol(L, defect_tol);
  const EigenDecomposition ed = eig(v.m, true);
  std::vector<int> order(static_cast<std::size_t>(ed.values.size()));
  std::iota(order.begin(), order.end(), 0);
  auto distance = [&](int k) { return std::abs(ed.values[k] - cplx(sign)); };
  std::sort(order.begin(), order.end(), [&](int x, int y) { return distance(x) < distance(y); });
  if (order.empty() || distance(order[0]) > tol) no_candidate(sign, order.empty() ? 0.0 : distance(order[0]), tol);
  const int count = order.size() > 1 && distance(order[1]) <= tol ? 2 : 1;
  Matrix cols(v.m.rows(), count);
  for (int c = 0; c < count; ++c) cols.col(c) = ed.vectors.col(order[c]);
  EdgeMode mode = make_mode(localize(cols, side), side, sign);
  mode.defect = (v.m * mode.canonical() - double(sign) * mode.canonical()).norm();
  return mode;
}

EdgeMode floquet_kernel_mode(const ModelParams& p, int sign, ModeSide side, double defect_tol) {
  if (p.closed()) return floquet_kernel_mode(build_floquet_matrix(p), sign, side, defect_tol);
  if (sign != 1 && sign != -1) throw ConfigError("InvalidParams", "sign must be +1 or -1");
  const double tol = default_tol(p.L, defect_tol);
  const auto a = build_floquet_banded(p, 0, cplx(-sign));
  double closest = 0.0;
  const Matrix kernel = banded_kernel(a, tol, &closest);
  if (kernel.cols() == 0) no_candidate(sign, closest, tol);
  EdgeMode mode = make_mode(localize(kernel, side), side, sign);
  mode.defect = banded_defect(p, mode.canonical(), sign);
  return mode;
}

LinearFit fit_decay(const EdgeMode& mode, double noise_floor, int* first, int* last) {
  std::vector<double> norms = mode.pair_norms();
  if (mode.side == ModeSide::Right) std::reverse(norms.begin(), norms.end());
  const double peak = *std::max_element(norms.begin(), norms.end());
  const int L = mode.L();
  const int stop = std::max(3, L / 4);
  std::vector<double> x, y;
  for (int d = 2; d <= std::min(stop, L); ++d) {
    const double v = norms[d - 1];
    if (!(v > noise_floor * peak)) break;
    x.push_back(d);
    y.push_back(std::log(v));
  }
  if (first) *first = 2;
  if (last) *last = 1 + static_cast<int>(x.size());
  if (x.size() < 3) {
    LinearFit none;
    none.points = static_cast<int>(x.size());
    return none;
  }
  return fit_line(x, y);
}

namespace {

ModeReport finish_report(const EdgeMode& mode, double defect, double tol) {
  ModeReport r;
  r.defect = defect;
  r.defect_ok = defect <= tol;
  r.decay_fit = fit_decay(mode, 1e-13, &r.fit_first_site, &r.fit_last_site);
  return r;
}

}  // namespace

ModeReport verify_mode(const FloquetMatrix& v, const EdgeMode& mode, double defect_tol) {
  if (v.m.rows() != mode.coeffs.size()) throw ConfigError("InvalidParams", "mode and matrix sizes differ");
  const Vector f = mode.canonical();
  return finish_report(mode, (v.m * f - double(mode.sign) * f).norm(), default_tol(mode.L(), defect_tol));
}

ModeReport verify_mode(const ModelParams& p, const EdgeMode& mode, double defect_tol) {
  if (p.L != mode.L()) throw ConfigError("InvalidParams", "mode and model sizes differ");
  if (p.closed()) return verify_mode(build_floquet_matrix(p), mode, defect_tol);
  return finish_report(mode, banded_defect(p, mode.canonical(), mode.sign), default_tol(mode.L(), defect_tol));
}

double mode_overlap(const EdgeMode& a, const EdgeMode& b) {
  if (a.coeffs.size() != b.coeffs.size()) throw ConfigError("InvalidParams", "mode sizes differ");
  return std::abs(a.coeffs.dot(b.coeffs)) / (a.coeffs.norm() * b.coeffs.norm());
}

}  // namespace nufloquet
