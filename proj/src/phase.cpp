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
#include <limits>
#include <numbers>
#include <sstream>

#include "nufloquet/error.hpp"
#include "nufloquet/floquet.hpp"
#include "nufloquet/precise.hpp"

namespace nufloquet {

std::string to_string(Phase phase) {
  switch (phase) {
    case Phase::Oscillatory: return "oscillatory";
    case Phase::TrivialDegenerate: return "trivial-degenerate";
    case Phase::Gapless: return "gapless";
  }
  return "gapless";
}

Phase classify_phase(double beta, double h_y) {
  const double c = std::cosh(2 * beta) * std::cos(2 * h_y);
  if (c < -1.0) return Phase::Oscillatory;
  if (c > 1.0) return Phase::TrivialDegenerate;
  return Phase::Gapless;
}

PhaseEvidence classify_phase(const QuasiSpectrum& open_chain, const QuasiSpectrum* bulk, const PhaseTolerances& tol) {
  if (open_chain.eps.empty()) throw ConfigError("InvalidParams", "empty spectrum");
  std::vector<double> ims;
  for (const cplx& e : open_chain.eps) ims.push_back(std::abs(e.imag()));
  const auto mid = std::min_element(ims.begin(), ims.end()) - ims.begin();

  PhaseEvidence ev;
  if (bulk) {
    ev.im_gap = std::numeric_limits<double>::infinity();
    for (const cplx& e : bulk->eps) ev.im_gap = std::min(ev.im_gap, std::abs(e.imag()));
  } else {
    std::vector<double> rest = ims;
    rest.erase(rest.begin() + mid);
    ev.im_gap = rest.empty() ? std::numeric_limits<double>::infinity() : *std::min_element(rest.begin(), rest.end());
  }
  ev.re_splitting = std::abs(2.0 * open_chain.eps[mid].real());

  if (ev.im_gap < tol.gap_tol) {
    ev.phase = Phase::Gapless;
    return ev;
  }
  std::ostringstream why;
  if (ev.im_gap < 2.0 * tol.gap_tol) {
    why << "bulk imaginary gap " << ev.im_gap << " inside the tolerance band [" << tol.gap_tol << ", "
        << 2.0 * tol.gap_tol << ")";
    throw NumericalError("AmbiguousClassification", why.str());
  }
  if (ims[mid] >= tol.gap_tol) {
    why << "gapped bulk but no mid-gap pair (smallest |Im eps| = " << ims[mid] << ")";
    throw NumericalError("AmbiguousClassification", why.str());
  }
  if (std::abs(ev.re_splitting - std::numbers::pi) < tol.split_tol) {
    ev.phase = Phase::Oscillatory;
  } else if (ev.re_splitting < tol.split_tol) {
    ev.phase = Phase::TrivialDegenerate;
  } else {
    why << "mid-gap real splitting " << ev.re_splitting << " is neither 0 nor pi";
    throw NumericalError("AmbiguousClassification", why.str());
  }
  return ev;
}

SplittingScan finite_size_splitting(const ModelParams& base, const std::vector<int>& sizes, double extended_below) {
  if (sizes.size() < 2) throw ConfigError("InvalidParams", "splitting scan needs at least two sizes");
  SplittingScan scan;
  std::vector<double> xl, xlog, y;
  for (int L : sizes) {
    ModelParams open = base;
    open.bc = Boundary::Open;
    const ModelParams p = open.resized(L);
    SpectrumOptions opt;
    opt.check_condition = false;
    const QuasiSpectrum s = quasi_energies(build_floquet_matrix(p), opt);
    int mid = 0;
    for (int k = 1; k < static_cast<int>(s.eps.size()); ++k)
      if (std::abs(s.eps[k].imag()) < std::abs(s.eps[mid].imag())) mid = k;
    SplittingPoint pt{L, std::abs(s.eps[mid].imag()), "dense"};
    const cplx m = s.raw[s.plus[mid]];
    // Only a pair pinned at m = +-1 is an edge pair worth resolving further.
    const int target = m.real() < 0 ? -1 : 1;
    if (pt.min_im < extended_below && std::abs(m - cplx(target)) < 1e-3) {
      const ExtendedResult r = extended_floquet_near(p, target);
      pt.min_im = std::min(r.im_eps[0], r.im_eps[1]);
      pt.method = "extended-" + std::to_string(r.digits);
    }
    scan.points.push_back(pt);
    xl.push_back(L);
    xlog.push_back(std::log(static_cast<double>(L)));
    y.push_back(std::log(std::max(pt.min_im, std::numeric_limits<double>::min())));
  }
  scan.exponential_fit = fit_line(xl, y);
  scan.power_fit = fit_line(xlog, y);
  scan.exponential = scan.exponential_fit.slope < 0.0 && scan.exponential_fit.r2 > 0.99 &&
                     scan.exponential_fit.r2 > scan.power_fit.r2;
  return scan;
}

}  // namespace nufloquet
