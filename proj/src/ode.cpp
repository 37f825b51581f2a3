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
#include <sstream>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "nufloquet/error.hpp"
#include "nufloquet/gaussian.hpp"
#include "nufloquet/oracle.hpp"

namespace nufloquet {

namespace {

namespace odeint = boost::numeric::odeint;
using OdeState = std::vector<cplx>;

}  // namespace

Matrix evolve_majorana_ode(const Matrix& cm, const MajoranaMatrix& h, double duration, const OdeOptions& opt) {
  const Eigen::Index n = cm.rows();
  if (h.dim() != n) throw ConfigError("InvalidParams", "generator and correlation sizes differ");
  if (duration < 0) throw ConfigError("InvalidParams", "duration must be non-negative");
  if (duration == 0.0) return cm;
  const Matrix hi = -h.dense();
  const double s = 2.0 * opt.cubic_sign;

  auto rhs = [&](const OdeState& x, OdeState& dxdt, double) {
    const Eigen::Map<const Matrix> g(x.data(), n, n);
    Eigen::Map<Matrix> dg(dxdt.data(), n, n);
    const Matrix hg = hi * g;
    dg = hg + g * hi + s * (g * hg);
  };

  OdeState x(static_cast<std::size_t>(n * n));
  Eigen::Map<Matrix>(x.data(), n, n) = 0.5 * cm;
  auto stepper = odeint::make_controlled(opt.abs_tol, opt.rel_tol, odeint::runge_kutta_dopri5<OdeState>());
  double t = 0.0;
  double dt = std::min(duration, 1e-2);
  const double floor = opt.min_step * std::max(1.0, duration);
  while (t < duration) {
    dt = std::min(dt, duration - t);
    if (stepper.try_step(rhs, x, t, dt) == odeint::fail) {
      if (dt < floor) {
        std::ostringstream msg;
        msg << "adaptive step fell to " << dt << " at x = " << t;
        throw NumericalError("StepSizeUnderflow", msg.str());
      }
    }
  }
  return 2.0 * Eigen::Map<const Matrix>(x.data(), n, n);
}

CorrelationState evolve_ode(const CorrelationState& state, const MajoranaMatrix& h, double duration,
                            const OdeOptions& opt) {
  const Matrix w = w_map(state.L());
  const Matrix cm = evolve_majorana_ode(state.majorana_correlation(), h, duration, opt);
  return CorrelationState::from_correlation(0.25 * w.adjoint() * cm * w, state.step());
}

namespace {

// C^m after one period: unitary factors as congruences, then the ODE.
Matrix period_majorana(Matrix cm, const ModelParams& p, std::int64_t step, const OdeOptions& opt) {
  const DriveFactors f = drive_factors(p, step);
  for (const FloquetFactor* u : {&f.y, &f.xx, &f.zz_phase}) {
    const Matrix r = u->dense();
    cm = r * cm * r.transpose();
  }
  return evolve_majorana_ode(cm, build_h_zz(p), p.beta, opt);
}

}  // namespace

CorrelationState step_ode(const CorrelationState& state, const ModelParams& p, std::int64_t step,
                          const OdeOptions& opt) {
  const Matrix cm = period_majorana(state.majorana_correlation(), p, step, opt);
  const Matrix w = w_map(p.L);
  return CorrelationState::from_correlation(0.25 * w.adjoint() * cm * w, state.step() + 1);
}

CubicSignReport resolve_cubic_sign(double beta, double h_y) {
  CubicSignReport report;
  report.L = 4;
  report.beta = beta;
  const ModelParams p = ModelParams::uniform(report.L, beta, h_y, 0.3);
  const std::vector<bool> occ{true, false, false, true};

  // Two periods so that the measurement acts on a correlated state.
  DenseState exact = y_fock_state(occ);
  for (int t = 0; t < 2; ++t) exact = apply_floquet(exact, p, t);
  const Matrix target = measure(exact).majorana;

  auto run = [&](int sign) {
    OdeOptions opt;
    opt.cubic_sign = sign;
    try {
      Matrix cm = initial_fock_state(occ).majorana_correlation();
      for (int t = 0; t < 2; ++t) cm = period_majorana(cm, p, t, opt);
      return (cm - target).cwiseAbs().maxCoeff();
    } catch (const Error&) {
      // The wrong sign can drive the flow off the projector manifold.
      return std::numeric_limits<double>::infinity();
    }
  };
  report.error_plus = run(+1);
  report.error_minus = run(-1);
  report.consistent = (kOdeCubicSign > 0) == (report.error_plus < report.error_minus);
  return report;
}

}  // namespace nufloquet
