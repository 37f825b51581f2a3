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

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

namespace nufloquet {

namespace banded_detail {
template <class S>
auto magnitude(const S& x) {
  using std::abs;
  return abs(x);
}
template <class S>
S conjugate(const S& x) {
  using std::conj;
  return S(conj(x));
}
template <class S>
using real_of = std::decay_t<decltype(magnitude(std::declval<S>()))>;
}  // namespace banded_detail

// Square banded matrix with kl sub- and ku super-diagonals, row-major band storage.
// Works for std::complex<double> and for extended-precision complex types.
template <class S>
class BandedMatrix {
 public:
  BandedMatrix() = default;
  BandedMatrix(int n, int kl, int ku)
      : n_(n), kl_(kl), ku_(ku), width_(kl + ku + 1), data_(static_cast<std::size_t>(n) * (kl + ku + 1), S(0)) {}

  static BandedMatrix identity(int n, int kl, int ku) {
    BandedMatrix m(n, kl, ku);
    for (int i = 0; i < n; ++i) m.at(i, i) = S(1);
    return m;
  }

  int size() const { return n_; }
  int lower() const { return kl_; }
  int upper() const { return ku_; }

  bool in_band(int i, int j) const { return j >= 0 && j < n_ && j - i <= ku_ && i - j <= kl_; }
  int col_begin(int i) const { return std::max(0, i - kl_); }
  int col_end(int i) const { return std::min(n_ - 1, i + ku_); }

  S& at(int i, int j) { return data_[static_cast<std::size_t>(i) * width_ + (j - i + kl_)]; }
  const S& at(int i, int j) const { return data_[static_cast<std::size_t>(i) * width_ + (j - i + kl_)]; }
  S get(int i, int j) const { return in_band(i, j) ? at(i, j) : S(0); }

  // Rows (p, q) <- [[c, s], [-s, c]] * (row p, row q).
  void mix_rows(int p, int q, const S& c, const S& s) {
    const int lo = std::min(col_begin(p), col_begin(q));
    const int hi = std::max(col_end(p), col_end(q));
    for (int j = lo; j <= hi; ++j) {
      const S x = get(p, j);
      const S y = get(q, j);
      const S np = c * x + s * y;
      const S nq = c * y - s * x;
      put(p, j, np);
      put(q, j, nq);
    }
  }

  void add_identity(const S& shift) {
    for (int i = 0; i < n_; ++i) at(i, i) += shift;
  }

  // B(i, j) = A(perm[i], perm[j]) in a band of (kl, ku).
  BandedMatrix permuted(const std::vector<int>& perm, int kl, int ku) const {
    std::vector<int> inv(n_);
    for (int i = 0; i < n_; ++i) inv[perm[i]] = i;
    BandedMatrix out(n_, kl, ku);
    for (int i = 0; i < n_; ++i)
      for (int j = col_begin(i); j <= col_end(i); ++j) out.put(inv[i], inv[j], at(i, j));
    return out;
  }

  std::vector<S> multiply(const std::vector<S>& x) const {
    std::vector<S> y(n_, S(0));
    for (int i = 0; i < n_; ++i)
      for (int j = col_begin(i); j <= col_end(i); ++j) y[i] += at(i, j) * x[j];
    return y;
  }

 private:
  void put(int i, int j, const S& v) {
    if (in_band(i, j)) {
      at(i, j) = v;
    } else if (v != S(0)) {
      throw std::logic_error("banded matrix fill outside its band");
    }
  }

  int n_ = 0, kl_ = 0, ku_ = 0, width_ = 1;
  std::vector<S> data_;
};

// LU with partial pivoting, fill-in kept in an upper band of kl + ku.
// Exactly zero pivots are replaced by `tiny` so inverse iteration can run on
// singular matrices.
template <class S>
class BandedLU {
 public:
  using Real = banded_detail::real_of<S>;

  BandedLU(const BandedMatrix<S>& a, const Real& tiny) : n_(a.size()), kl_(a.lower()), lu_(a.size(), a.lower(), a.lower() + a.upper()), piv_(a.size()) {
    for (int i = 0; i < n_; ++i)
      for (int j = a.col_begin(i); j <= a.col_end(i); ++j) lu_.at(i, j) = a.at(i, j);
    const int ku2 = lu_.upper();
    for (int k = 0; k < n_; ++k) {
      const int last = std::min(n_ - 1, k + kl_);
      int p = k;
      Real best = banded_detail::magnitude(lu_.at(k, k));
      for (int i = k + 1; i <= last; ++i) {
        const Real m = banded_detail::magnitude(lu_.at(i, k));
        if (m > best) {
          best = m;
          p = i;
        }
      }
      piv_[k] = p;
      const int cend = std::min(n_ - 1, k + ku2);
      if (p != k)
        for (int j = k; j <= cend; ++j) std::swap(lu_.at(k, j), lu_.at(p, j));
      if (best == Real(0)) {
        lu_.at(k, k) = S(tiny);
        ++replaced_pivots_;
      }
      const S pivot = lu_.at(k, k);
      for (int i = k + 1; i <= last; ++i) {
        const S l = lu_.at(i, k) / pivot;
        lu_.at(i, k) = l;
        if (l == S(0)) continue;
        for (int j = k + 1; j <= cend; ++j) lu_.at(i, j) -= l * lu_.at(k, j);
      }
    }
  }

  std::vector<S> solve(std::vector<S> b) const {
    for (int k = 0; k < n_; ++k) {
      if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
      const int last = std::min(n_ - 1, k + kl_);
      for (int i = k + 1; i <= last; ++i) b[i] -= lu_.at(i, k) * b[k];
    }
    const int ku2 = lu_.upper();
    for (int i = n_ - 1; i >= 0; --i) {
      S acc = b[i];
      const int cend = std::min(n_ - 1, i + ku2);
      for (int j = i + 1; j <= cend; ++j) acc -= lu_.at(i, j) * b[j];
      b[i] = acc / lu_.at(i, i);
    }
    return b;
  }

  int replaced_pivots() const { return replaced_pivots_; }

 private:
  int n_;
  int kl_;
  BandedMatrix<S> lu_;
  std::vector<int> piv_;
  int replaced_pivots_ = 0;
};

template <class S>
struct RitzPairs {
  std::vector<S> values;
  std::vector<std::vector<S>> vectors;
  int iterations = 0;
};

namespace banded_detail {

template <class S>
S dot(const std::vector<S>& x, const std::vector<S>& y) {
  S acc(0);
  for (std::size_t i = 0; i < x.size(); ++i) acc += conjugate(x[i]) * y[i];
  return acc;
}

template <class S>
auto norm(const std::vector<S>& x) {
  using std::sqrt;
  real_of<S> acc(0);
  for (const auto& v : x) {
    const auto m = magnitude(v);
    acc += m * m;
  }
  return real_of<S>(sqrt(acc));
}

template <class S>
void orthonormalize(std::vector<std::vector<S>>& xs) {
  for (int pass = 0; pass < 2; ++pass)
    for (std::size_t k = 0; k < xs.size(); ++k) {
      for (std::size_t j = 0; j < k; ++j) {
        const S c = dot(xs[j], xs[k]);
        for (std::size_t i = 0; i < xs[k].size(); ++i) xs[k][i] -= c * xs[j][i];
      }
      const auto nrm = norm(xs[k]);
      for (auto& v : xs[k]) v /= S(nrm);
    }
}

}  // namespace banded_detail

// Two eigenvalues of smallest magnitude by block inverse iteration followed by
// a Rayleigh-Ritz step on the 2-dimensional subspace.
template <class S>
RitzPairs<S> smallest_two_eigenpairs(const BandedMatrix<S>& a, const typename BandedLU<S>::Real& tiny,
                                     int max_iterations, double rel_change_tol) {
  using std::sqrt;
  using Real = typename BandedLU<S>::Real;
  const int n = a.size();
  BandedLU<S> lu(a, tiny);
  std::vector<std::vector<S>> x(2, std::vector<S>(n));
  std::uint64_t state = 0x2545F4914F6CDD1DULL;
  auto next = [&state]() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5;
  };
  for (auto& col : x)
    for (auto& v : col) {
      const double re = next();
      const double im = next();
      v = S(re, im);
    }
  banded_detail::orthonormalize(x);

  RitzPairs<S> out;
  std::vector<S> previous;
  for (int it = 1; it <= max_iterations; ++it) {
    for (auto& col : x) col = lu.solve(col);
    banded_detail::orthonormalize(x);

    const std::vector<S> a0 = a.multiply(x[0]);
    const std::vector<S> a1 = a.multiply(x[1]);
    const S b00 = banded_detail::dot(x[0], a0), b01 = banded_detail::dot(x[0], a1);
    const S b10 = banded_detail::dot(x[1], a0), b11 = banded_detail::dot(x[1], a1);
    const S tr = b00 + b11;
    const S det = b00 * b11 - b01 * b10;
    const S disc = S(sqrt(tr * tr - S(4) * det));
    S l1 = (tr + disc) / S(2);
    S l2 = (tr - disc) / S(2);
    // The smaller root loses digits to cancellation; recover it from the product.
    if (banded_detail::magnitude(l1) < banded_detail::magnitude(l2)) std::swap(l1, l2);
    if (l1 != S(0)) l2 = det / l1;
    std::vector<S> vals{l2, l1};

    out.values = vals;
    out.iterations = it;
    out.vectors.assign(2, std::vector<S>(n));
    for (int r = 0; r < 2; ++r) {
      const S lam = vals[r];
      S y0 = b01, y1 = lam - b00;
      const S z0 = lam - b11, z1 = b10;
      const Real ny = banded_detail::magnitude(y0) + banded_detail::magnitude(y1);
      const Real nz = banded_detail::magnitude(z0) + banded_detail::magnitude(z1);
      if (nz > ny) {
        y0 = z0;
        y1 = z1;
      }
      if (ny == Real(0) && nz == Real(0)) {
        y0 = S(r == 0 ? 1 : 0);
        y1 = S(r == 0 ? 0 : 1);
      }
      for (int i = 0; i < n; ++i) out.vectors[r][i] = y0 * x[0][i] + y1 * x[1][i];
      const auto nrm = banded_detail::norm(out.vectors[r]);
      for (auto& v : out.vectors[r]) v /= S(nrm);
    }

    if (!previous.empty()) {
      bool done = true;
      for (int r = 0; r < 2; ++r) {
        const Real scale = banded_detail::magnitude(vals[r]);
        const Real diff = banded_detail::magnitude(vals[r] - previous[r]);
        if (scale == Real(0) ? diff != Real(0) : diff > Real(rel_change_tol) * scale) done = false;
      }
      if (done) break;
    }
    previous = vals;
  }
  return out;
}

}  // namespace nufloquet
