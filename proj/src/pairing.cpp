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

#include "nufloquet/detail/pairing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include <Eigen/LU>

#include "nufloquet/error.hpp"

namespace nufloquet::detail {

std::vector<std::pair<int, int>> greedy_pairs(const std::vector<int>& order,
                                              const std::function<double(int, int)>& distance,
                                              const std::function<double(int)>& tol) {
  const int n = static_cast<int>(order.size());
  if (n % 2 != 0) throw NumericalError("PairingFailed", "odd number of eigenvalues");
  std::vector<char> taken(n, 0);
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(n / 2);
  for (int a : order) {
    if (taken[a]) continue;
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int b : order) {
      if (b == a || taken[b]) continue;
      const double d = distance(a, b);
      if (d < best_d) {
        best_d = d;
        best = b;
      }
    }
    if (best < 0 || !(best_d <= tol(a))) {
      std::ostringstream msg;
      msg << "eigenvalue " << a << " has no particle-hole partner; residual " << best_d << " > tolerance "
          << tol(a);
      throw NumericalError("PairingFailed", msg.str());
    }
    taken[a] = taken[best] = 1;
    pairs.emplace_back(a, best);
  }
  return pairs;
}

namespace {

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

// Columns e with e_i^T e_k = delta_ik spanning the same space as `cols`.
Matrix bilinear_orthonormalize(Matrix cols) {
  const int r = static_cast<int>(cols.cols());
  for (int k = 0; k < r; ++k) cols.col(k).normalize();
  Matrix out(cols.rows(), r);
  std::vector<int> remaining(r);
  std::iota(remaining.begin(), remaining.end(), 0);
  int produced = 0;
  while (!remaining.empty()) {
    int pick = -1;
    double best = 0.0;
    for (int c : remaining) {
      const double v = std::abs(cols.col(c).dot(cols.col(c).conjugate()));
      const double s = cols.col(c).squaredNorm();
      if (s > 0.0 && v / s > best) {
        best = v / s;
        pick = c;
      }
    }
    if (pick < 0 || best < 1e-6) {
      // Every remaining column is (nearly) isotropic; combine the two with the
      // largest mutual bilinear product.
      int c1 = -1, c2 = -1;
      double mutual = 0.0;
      for (std::size_t i = 0; i < remaining.size(); ++i)
        for (std::size_t j = i + 1; j < remaining.size(); ++j) {
          const int a = remaining[i], b = remaining[j];
          const double v = std::abs((cols.col(a).transpose() * cols.col(b))(0, 0)) /
                           (cols.col(a).norm() * cols.col(b).norm());
          if (v > mutual) {
            mutual = v;
            c1 = a;
            c2 = b;
          }
        }
      if (c1 < 0 || mutual < 1e-6)
        throw NumericalError("DegeneracyRepairFailed", "degenerate eigenspace has a singular bilinear form");
      cols.col(c1) += cols.col(c2);
      pick = c1;
    }
    const cplx b = (cols.col(pick).transpose() * cols.col(pick))(0, 0);
    Vector e = cols.col(pick) / std::sqrt(b);
    out.col(produced++) = e;
    remaining.erase(std::find(remaining.begin(), remaining.end(), pick));
    for (int c : remaining) {
      const cplx proj = (e.transpose() * cols.col(c))(0, 0);
      cols.col(c) -= proj * e;
    }
  }
  return out;
}

}  // namespace

void repair_pairs(Matrix& vecs, std::vector<std::pair<int, int>>& pairs, const std::vector<cplx>& key,
                  double cluster_tol, const std::function<cplx(const Vector&, const Vector&)>& estimate,
                  const std::function<bool(cplx, cplx)>& first_is_plus) {
  const int n = static_cast<int>(key.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (std::abs(key[a] - key[b]) <= cluster_tol * (1.0 + std::abs(key[a])))
        parent[find_root(parent, a)] = find_root(parent, b);

  std::vector<int> partner(n, -1);
  for (const auto& [p, m] : pairs) {
    partner[p] = m;
    partner[m] = p;
  }

  std::map<int, std::vector<int>> clusters;
  for (int a = 0; a < n; ++a) clusters[find_root(parent, a)].push_back(a);

  std::vector<std::pair<int, int>> out;
  out.reserve(pairs.size());
  std::vector<char> done(n, 0);
  for (auto& [root, members] : clusters) {
    if (done[members.front()]) continue;
    const int partner_root = find_root(parent, partner[members.front()]);
    if (partner_root == root) {
      // Self-partner eigenspace: build isotropic pairs.
      if (members.size() % 2 != 0)
        throw NumericalError("DegeneracyRepairFailed", "self-partner eigenspace has odd dimension");
      Matrix cols(vecs.rows(), members.size());
      for (std::size_t k = 0; k < members.size(); ++k) cols.col(k) = vecs.col(members[k]);
      const Matrix e = bilinear_orthonormalize(cols);
      const double r2 = std::sqrt(0.5);
      for (std::size_t k = 0; k < members.size() / 2; ++k) {
        Vector p = r2 * (e.col(2 * k) - kI * e.col(2 * k + 1));
        Vector q = r2 * (e.col(2 * k) + kI * e.col(2 * k + 1));
        const cplx mp = estimate(p, q);
        const cplx mq = estimate(q, p);
        int ip = members[2 * k], iq = members[2 * k + 1];
        if (!first_is_plus(mp, mq)) std::swap(p, q);
        // Unit Hermitian norm on the plus side, partner rescaled to keep p^T q = 1.
        const double s = p.norm();
        vecs.col(ip) = p / s;
        vecs.col(iq) = q * s;
        out.emplace_back(ip, iq);
      }
      for (int a : members) done[a] = 1;
      continue;
    }
    const std::vector<int>& other = clusters[partner_root];
    if (other.size() != members.size())
      throw NumericalError("DegeneracyRepairFailed", "partner eigenspaces differ in dimension");
    const int d = static_cast<int>(members.size());
    Matrix a(vecs.rows(), d), b(vecs.rows(), d);
    for (int k = 0; k < d; ++k) {
      a.col(k) = vecs.col(members[k]).normalized();
      b.col(k) = vecs.col(other[k]);
    }
    const Matrix g = a.transpose() * b;
    Eigen::FullPivLU<Matrix> lu(g);
    if (!lu.isInvertible() || lu.rcond() < 1e-13)
      throw NumericalError("DegeneracyRepairFailed", "partner eigenspaces are bilinearly singular");
    const Matrix bn = b * lu.inverse();
    const bool a_is_plus = first_is_plus(key[members.front()], key[other.front()]);
    for (int k = 0; k < d; ++k) {
      vecs.col(members[k]) = a.col(k);
      vecs.col(other[k]) = bn.col(k);
      if (a_is_plus)
        out.emplace_back(members[k], other[k]);
      else
        out.emplace_back(other[k], members[k]);
    }
    for (int x : members) done[x] = 1;
    for (int x : other) done[x] = 1;
  }
  pairs = std::move(out);
}

}  // namespace nufloquet::detail
