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

#include "nufloquet/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "nufloquet/edge_modes.hpp"
#include "nufloquet/error.hpp"
#include "nufloquet/floquet.hpp"
#include "nufloquet/gaussian.hpp"
#include "nufloquet/oracle.hpp"
#include "nufloquet/precise.hpp"

namespace nufloquet::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Task task_from_string(const std::string& s) {
  if (s == "spectrum") return Task::Spectrum;
  if (s == "edge") return Task::Edge;
  if (s == "dynamics") return Task::Dynamics;
  if (s == "phase-diagram") return Task::PhaseDiagram;
  if (s == "entanglement") return Task::Entanglement;
  if (s == "verify") return Task::Verify;
  throw ConfigError("InvalidTask", "unknown task '" + s + "'");
}

Engine engine_from_string(const std::string& s) {
  if (s == "gaussian") return Engine::Gaussian;
  if (s == "exact") return Engine::Exact;
  if (s == "both") return Engine::Both;
  throw ConfigError("InvalidEngine", "engine must be gaussian, exact or both, got '" + s + "'");
}

// Reads an option with a default, turning JSON type errors into ConfigError.
template <class T>
T opt(const json& o, const char* key, T fallback) {
  if (!o.contains(key) || o.at(key).is_null()) return fallback;
  try {
    return o.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("InvalidOption", std::string("option '") + key + "': " + e.what());
  }
}

std::vector<double> opt_list(const json& o, const char* key, std::vector<double> fallback) {
  return opt<std::vector<double>>(o, key, std::move(fallback));
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header) {
    for (std::size_t i = 0; i < header.size(); ++i) body_ << (i ? "," : "") << header[i];
    body_ << '\n';
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) body_ << (i ? "," : "") << cells[i];
    body_ << '\n';
  }
  std::string str() const { return body_.str(); }

 private:
  std::ostringstream body_;
};

std::string num(double x) { return format_number(x); }
std::string num(int x) { return std::to_string(x); }
std::string num(std::int64_t x) { return std::to_string(x); }

struct Output {
  fs::path dir;
  std::vector<std::string> files;
  std::mutex mu;

  void write(const std::string& name, const std::string& contents) {
    write_atomic(dir / name, contents);
    const std::lock_guard<std::mutex> lock(mu);
    files.push_back(name);
  }
  void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }
};

ModelParams with_uniform_field(ModelParams p, double h) {
  std::fill(p.h_y.begin(), p.h_y.end(), h);
  if (p.disorder.kind != DisorderKind::None) p.disorder.mean = h;
  return p;
}

SpectrumOptions spectrum_options(const json& o) {
  SpectrumOptions s;
  s.pair_tol = opt(o, "pair_tol", s.pair_tol);
  s.gap_tol = opt(o, "gap_tol", s.gap_tol);
  s.branch_tol = opt(o, "branch_tol", s.branch_tol);
  s.degeneracy_tol = opt(o, "degeneracy_tol", s.degeneracy_tol);
  s.condition_limit = opt(o, "condition_limit", s.condition_limit);
  return s;
}

// ---------------------------------------------------------------- spectrum

struct SpectrumRows {
  std::vector<cplx> eps;
  std::vector<cplx> m;
  std::vector<char> mid;
  int half_pi = 0;
};

SpectrumRows numeric_rows(const ModelParams& p, SpectrumOptions so) {
  so.vectors = false;
  so.check_condition = false;
  const QuasiSpectrum s = quasi_energies(build_floquet_matrix(p), so);
  SpectrumRows r;
  for (int k = 0; k < s.L; ++k) {
    r.eps.push_back(s.eps[k]);
    r.m.push_back(s.raw[s.plus[k]]);
    r.mid.push_back(s.mid_gap[k]);
  }
  r.half_pi = s.half_pi_count;
  return r;
}

SpectrumRows analytic_rows(const ModelParams& p, double gap_tol) {
  const Boundary bc = p.closed() ? p.bc : Boundary::Periodic;
  SpectrumRows r;
  std::vector<cplx> all;
  for (double k : momentum_grid(p.L, bc)) {
    const auto [e1, e2] = analytic_spectrum(p.beta, p.h_y.front(), k);
    all.push_back(wrap_quasi_energy(e1.imag() >= e2.imag() ? e1 : e2));
  }
  std::stable_sort(all.begin(), all.end(), [](cplx a, cplx b) {
    if (a.imag() != b.imag()) return a.imag() > b.imag();
    return a.real() > b.real();
  });
  for (cplx e : all) {
    r.eps.push_back(e);
    r.m.push_back(std::exp(-2.0 * kI * e));
    r.mid.push_back(std::abs(e.imag()) < gap_tol);
  }
  return r;
}

std::string spectrum_csv(const SpectrumRows& r) {
  CsvWriter csv({"pair_index", "re_eps", "im_eps", "is_mid_gap", "raw_re_m", "raw_im_m"});
  for (std::size_t k = 0; k < r.eps.size(); ++k)
    csv.row({num(static_cast<int>(k)), num(r.eps[k].real()), num(r.eps[k].imag()), r.mid[k] ? "1" : "0",
             num(r.m[k].real()), num(r.m[k].imag())});
  return csv.str();
}

json run_spectrum(const RunConfig& cfg, Output& out, int workers) {
  const json& o = cfg.options;
  const std::string method = opt<std::string>(o, "method", "numeric");
  if (method != "numeric" && method != "analytic") throw ConfigError("InvalidOption", "method must be numeric or analytic");
  const SpectrumOptions so = spectrum_options(o);
  std::string param = "none";
  std::vector<double> values{kNaN};
  if (o.contains("sweep")) {
    param = opt<std::string>(o.at("sweep"), "param", "h_y");
    if (param != "h_y" && param != "beta") throw ConfigError("InvalidOption", "sweep.param must be h_y or beta");
    values = opt_list(o.at("sweep"), "values", {});
    if (values.empty()) throw ConfigError("InvalidOption", "sweep.values is empty");
  }
  std::vector<SpectrumRows> rows(values.size());
  parallel_for(static_cast<int>(values.size()), workers, [&](int i) {
    ModelParams p = cfg.model;
    if (param == "h_y") p = with_uniform_field(p, values[i]);
    if (param == "beta") p.beta = values[i];
    rows[i] = method == "numeric" ? numeric_rows(p, so) : analytic_rows(p, so.gap_tol);
  });
  CsvWriter summary({"index", param, "min_abs_im", "bulk_im_gap", "mid_gap_count", "half_pi_count"});
  json list = json::array();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::string name = "spectrum_" + std::to_string(i) + ".csv";
    out.write(name, spectrum_csv(rows[i]));
    double min_all = INFINITY, bulk = INFINITY;
    int mids = 0;
    for (std::size_t k = 0; k < rows[i].eps.size(); ++k) {
      const double im = std::abs(rows[i].eps[k].imag());
      min_all = std::min(min_all, im);
      if (rows[i].mid[k])
        ++mids;
      else
        bulk = std::min(bulk, im);
    }
    summary.row({num(static_cast<int>(i)), num(values[i]), num(min_all), num(bulk), num(mids), num(rows[i].half_pi)});
    list.push_back({{"file", name}, {"value", values[i]}, {"mid_gap_count", mids}, {"bulk_im_gap", bulk}});
  }
  out.write("spectrum_summary.csv", summary.str());
  return {{"method", method}, {"sweep_param", param}, {"spectra", list}};
}

// ---------------------------------------------------------------- edge modes

std::string mode_csv(const EdgeMode& m) {
  CsvWriter csv({"site", "re_va", "im_va", "re_vb", "im_vb", "pair_norm"});
  const auto norms = m.pair_norms();
  for (int s = 0; s < m.L(); ++s)
    csv.row({num(s + 1), num(m.coeffs[2 * s].real()), num(m.coeffs[2 * s].imag()), num(m.coeffs[2 * s + 1].real()),
             num(m.coeffs[2 * s + 1].imag()), num(norms[s])});
  return csv.str();
}

bool uniform(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

json fit_json(const LinearFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}, {"points", f.points}};
}

json run_edge(const RunConfig& cfg, Output& out, int workers) {
  const json& o = cfg.options;
  const ModelParams& p = cfg.model;
  const bool free = !p.has_xx() && !p.has_zz_phase() && !p.has_yy() && p.disorder.kind == DisorderKind::None &&
                    uniform(p.h_y) && !p.closed();
  const std::string mode_kind = opt<std::string>(o, "mode", free ? "analytic" : "kernel");
  const int sign = opt(o, "sign", kAnticommuting);
  const ModeSide side = opt<std::string>(o, "side", "left") == "right" ? ModeSide::Right : ModeSide::Left;
  const double defect_tol = opt(o, "defect_tol", -1.0);

  EdgeMode mode;
  if (mode_kind == "analytic") {
    if (!free) throw ConfigError("UnsupportedCouplings", "analytic mode needs J = 0, uniform field, open chain");
    mode = analytic_edge_mode(p.beta, p.h_y.front(), p.L, side);
  } else if (mode_kind == "kernel") {
    mode = floquet_kernel_mode(p, sign, side, defect_tol);
  } else if (mode_kind == "boundary") {
    mode = boundary_kernel_mode(p, sign, side, defect_tol);
  } else {
    throw ConfigError("InvalidOption", "mode must be analytic, kernel or boundary");
  }
  out.write("edge_mode.csv", mode_csv(mode));
  const ModeReport rep = verify_mode(p, mode, defect_tol);

  json report{{"defect", mode.defect},
              {"defect_ok", rep.defect_ok},
              {"slope", rep.decay_fit.slope},
              {"fit", fit_json(rep.decay_fit)},
              {"fit_sites", {rep.fit_first_site, rep.fit_last_site}},
              {"mode", mode_kind},
              {"side", to_string(side)},
              {"sign", sign}};
  report["slope_analytic"] = nullptr;
  if (!p.has_xx() && !p.has_zz_phase() && uniform(p.h_y) && p.disorder.kind == DisorderKind::None)
    report["slope_analytic"] = std::log(std::abs(transfer_matrix(p.beta, p.h_y.front()).eigenvalues[0]));
  report["eig_min_of_M"] = nullptr;
  const bool m_ok = !p.closed() && !p.has_zz_phase() && !p.has_yy();
  if (m_ok && opt(o, "with_m", true)) {
    const BoundaryEigenvalue be = boundary_smallest_eigenvalue(p, sign);
    report["eig_min_of_M"] = be.min_abs;
    report["log10_eig_min_of_M"] = be.log10_min_abs;
    report["eig_min_method"] = be.method;
    if (opt(o, "compare_boundary", false)) {
      const EdgeMode bm = boundary_kernel_mode(p, sign, side, defect_tol);
      report["overlap_with_M_kernel"] = mode_overlap(mode, bm);
      out.write("edge_mode_M.csv", mode_csv(bm));
    }
  }
  if (opt(o, "with_spectrum", false)) {
    out.write("spectrum.csv", spectrum_csv(numeric_rows(p, spectrum_options(o))));
  }

  const std::vector<double> m_sizes = opt_list(o, "m_scaling_sizes", {});
  if (!m_sizes.empty()) {
    if (!m_ok) throw ConfigError("UnsupportedCouplings", "M scaling needs an open chain with J_zz = 0");
    std::vector<BoundaryEigenvalue> res(m_sizes.size());
    parallel_for(static_cast<int>(m_sizes.size()), workers, [&](int i) {
      res[i] = boundary_smallest_eigenvalue(p.resized(static_cast<int>(m_sizes[i])), sign);
    });
    CsvWriter csv({"L", "log10_min_abs", "method"});
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < res.size(); ++i) {
      csv.row({num(static_cast<int>(m_sizes[i])), num(res[i].log10_min_abs), res[i].method});
      xs.push_back(m_sizes[i]);
      ys.push_back(res[i].log10_min_abs * std::log(10.0));
    }
    out.write("m_scaling.csv", csv.str());
    report["m_scaling_fit"] = fit_json(fit_line(xs, ys));
  }

  const std::vector<double> split_sizes = opt_list(o, "splitting_sizes", {});
  if (!split_sizes.empty()) {
    std::vector<int> sizes;
    for (double L : split_sizes) sizes.push_back(static_cast<int>(L));
    const SplittingScan scan = finite_size_splitting(p, sizes);
    CsvWriter csv({"L", "min_im", "method"});
    for (const auto& pt : scan.points) csv.row({num(pt.L), num(pt.min_im), pt.method});
    out.write("splitting.csv", csv.str());
    report["splitting"] = {{"exponential", scan.exponential},
                           {"exponential_fit", fit_json(scan.exponential_fit)},
                           {"power_fit", fit_json(scan.power_fit)}};
  }
  out.write_json("edge_report.json", report);
  return report;
}

// ---------------------------------------------------------------- dynamics

struct Initial {
  std::string type;
  std::vector<bool> bits;  // occupation (fock) or spin down (z_product)
};

Initial initial_state(const json& o, int L) {
  const json spec = o.contains("initial") ? o.at("initial") : json{{"type", "fock"}};
  Initial init;
  init.type = opt<std::string>(spec, "type", "fock");
  if (init.type == "fock") {
    const auto occ = opt<std::vector<int>>(spec, "occupied", std::vector<int>(L, 0));
    for (int v : occ) init.bits.push_back(v != 0);
  } else if (init.type == "z_product") {
    const auto down = opt<std::vector<int>>(spec, "down", std::vector<int>(L, 0));
    for (int v : down) init.bits.push_back(v != 0);
  } else if (init.type == "random_z") {
    init.type = "z_product";
    std::mt19937_64 rng(opt<std::uint64_t>(spec, "seed", 0));
    for (int j = 0; j < L; ++j) init.bits.push_back((rng() >> 63) != 0);
  } else {
    throw ConfigError("InvalidOption", "initial.type must be fock, z_product or random_z");
  }
  if (static_cast<int>(init.bits.size()) != L) throw ConfigError("InvalidOption", "initial state length differs from L");
  return init;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? kNaN : s / static_cast<double>(v.size());
}

std::string gaussian_trajectory(const ModelParams& p, const Initial& init, std::int64_t steps, int every,
                                json& summary) {
  if (init.type != "fock")
    throw ConfigError("UnsupportedInitialState", "the Gaussian engine needs a definite-parity Fock state");
  const Evolution evo(p);
  std::vector<CorrelationState> ss;
  if (!evo.time_dependent()) {
    try {
      const QuasiSpectrum s = quasi_energies(build_floquet_matrix(p));
      ss.push_back(steady_state_in_sector(s, +1));
      ss.push_back(steady_state_in_sector(s, -1));
    } catch (const NumericalError& e) {
      summary["steady_state_error"] = e.what();
    }
  }
  CsvWriter csv({"t", "mean_Y", "bond_ZZ_mean", "parity", "entropy_half_cut", "dist_to_ss1", "dist_to_ss2"});
  CorrelationState st = initial_fock_state(init.bits);
  for (std::int64_t t = 0; t <= steps; ++t) {
    if (t % every == 0 || t == steps) {
      const Observables ob = observables(st);
      const double d1 = ss.empty() ? kNaN : (st.correlation() - ss[0].correlation()).norm();
      const double d2 = ss.empty() ? kNaN : (st.correlation() - ss[1].correlation()).norm();
      csv.row({num(t), num(mean(ob.y)), num(mean(ob.zz)), num(ob.parity), num(entanglement_entropy(st, p.L / 2)),
               num(d1), num(d2)});
    }
    if (t < steps) st = evo.advance(st);
  }
  const InvariantDefects d = check_invariants(st);
  summary["gaussian_invariant_defect"] = d.max();
  return csv.str();
}

std::string exact_trajectory(const ModelParams& p, const Initial& init, std::int64_t steps, int every,
                             json& summary) {
  check_oracle_size(p.L);
  DenseState st = init.type == "fock" ? y_fock_state(init.bits) : z_product_state(init.bits);
  std::vector<Matrix> ss;
  const Matrix w = w_map(p.L);
  if (p.L <= 8 && p.disorder.kind != DisorderKind::Stochastic) {
    const ManyBodySpectrum spec = spectral_decompose(p);
    for (int parity : {+1, -1}) {
      try {
        ss.push_back(measure(oracle_steady_state(spec, parity)).majorana);
      } catch (const NumericalError&) {
        ss.clear();
        break;
      }
    }
  }
  CsvWriter csv({"t", "mean_Y", "bond_ZZ_mean", "parity", "entropy_half_cut", "dist_to_ss1", "dist_to_ss2",
                 "mean_Z"});
  for (std::int64_t t = 0; t <= steps; ++t) {
    if (t % every == 0 || t == steps) {
      const Measurement m = measure(st, !ss.empty());
      std::vector<double> bonds;
      for (int j = 0; j + 1 < p.L; ++j) bonds.push_back(m.zz(j, j + 1).real());
      double d1 = kNaN, d2 = kNaN;
      if (!ss.empty()) {
        d1 = 0.25 * (w.adjoint() * (m.majorana - ss[0]) * w).norm();
        d2 = 0.25 * (w.adjoint() * (m.majorana - ss[1]) * w).norm();
      }
      csv.row({num(t), num(mean(m.y)), num(mean(bonds)), num(m.parity), num(oracle_entropy(st, p.L / 2)), num(d1),
               num(d2), num(mean(m.z))});
    }
    if (t < steps) st = apply_floquet(st, p, t);
  }
  summary["exact_final_norm"] = st.amp.norm();
  return csv.str();
}

json run_dynamics(const RunConfig& cfg, Output& out, int) {
  const json& o = cfg.options;
  const ModelParams& p = cfg.model;
  const auto steps = opt<std::int64_t>(o, "steps", 100);
  const int every = std::max(1, opt(o, "record_every", 1));
  if (steps < 0) throw ConfigError("InvalidOption", "steps must be non-negative");
  const Initial init = initial_state(o, p.L);
  json summary{{"steps", steps}, {"initial", {{"type", init.type}, {"bits", init.bits}}}};
  if (cfg.engine != Engine::Exact) out.write("trajectory_gaussian.csv", gaussian_trajectory(p, init, steps, every, summary));
  if (cfg.engine != Engine::Gaussian) out.write("trajectory_exact.csv", exact_trajectory(p, init, steps, every, summary));
  return summary;
}

// ---------------------------------------------------------------- phase diagram

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return v;
}

double analytic_im_gap(double beta, double h) {
  double gap = INFINITY;
  constexpr int kSamples = 2001;
  for (int i = 0; i < kSamples; ++i) {
    const double k = std::numbers::pi * i / (kSamples - 1);
    const auto [e1, e2] = analytic_spectrum(beta, h, k);
    gap = std::min({gap, std::abs(e1.imag()), std::abs(e2.imag())});
  }
  return gap;
}

json run_phase_diagram(const RunConfig& cfg, Output& out, int workers) {
  const json& o = cfg.options;
  const std::vector<double> br = opt_list(o, "beta_range", {0.0, 2.5});
  const std::vector<double> hr = opt_list(o, "h_range", {0.0, std::numbers::pi / 2});
  if (br.size() != 2 || hr.size() != 2) throw ConfigError("InvalidOption", "ranges need two entries");
  const int nb = opt(o, "n_beta", 40), nh = opt(o, "n_h", 40);
  if (nb < 1 || nh < 1) throw ConfigError("InvalidOption", "grid sizes must be positive");
  const std::string method = opt<std::string>(o, "method", "both");
  if (method != "analytic" && method != "numeric" && method != "both")
    throw ConfigError("InvalidOption", "method must be analytic, numeric or both");
  PhaseTolerances tol;
  tol.gap_tol = opt(o, "gap_tol", tol.gap_tol);
  tol.split_tol = opt(o, "split_tol", tol.split_tol);
  const double band = opt(o, "band", 0.05);
  const int L = cfg.model.L;
  const auto betas = linspace(br[0], br[1], nb);
  const auto hs = linspace(hr[0], hr[1], nh);

  struct Cell {
    std::string analytic, numeric;
    double a_gap = kNaN, n_gap = kNaN, n_split = kNaN;
  };
  std::vector<Cell> cells(static_cast<std::size_t>(nb) * nh);
  const bool do_numeric = method != "analytic";
  const bool do_analytic = method != "numeric";
  parallel_for(nb * nh, workers, [&](int idx) {
    const double beta = betas[idx / nh], h = hs[idx % nh];
    Cell& c = cells[idx];
    if (do_analytic) {
      c.analytic = to_string(classify_phase(beta, h));
      c.a_gap = analytic_im_gap(beta, h);
    }
    if (do_numeric) {
      ModelParams p = with_uniform_field(cfg.model, h);
      p.beta = beta;
      p.bc = Boundary::Open;
      p = p.resized(L);
      ModelParams closed = p;
      closed.bc = Boundary::Periodic;
      closed = closed.resized(L);
      SpectrumOptions so;
      so.vectors = false;
      so.check_condition = false;
      so.gap_tol = tol.gap_tol;
      try {
        const QuasiSpectrum open_s = quasi_energies(build_floquet_matrix(p), so);
        const QuasiSpectrum bulk_s = quasi_energies(build_floquet_matrix(closed), so);
        const PhaseEvidence ev = classify_phase(open_s, &bulk_s, tol);
        c.numeric = to_string(ev.phase);
        c.n_gap = ev.im_gap;
        c.n_split = ev.re_splitting;
      } catch (const NumericalError& e) {
        if (e.code() != "AmbiguousClassification") throw;
        c.numeric = "ambiguous";
      }
    }
  });

  json summary{{"n_beta", nb}, {"n_h", nh}, {"L", L}, {"method", method}};
  for (const std::string which : {"analytic", "numeric"}) {
    if ((which == "analytic" && !do_analytic) || (which == "numeric" && !do_numeric)) continue;
    CsvWriter csv({"beta", "h_y", "L", "label", "im_gap", "re_splitting"});
    for (int idx = 0; idx < nb * nh; ++idx) {
      const Cell& c = cells[idx];
      const bool a = which == "analytic";
      csv.row({num(betas[idx / nh]), num(hs[idx % nh]), num(L), a ? c.analytic : c.numeric, num(a ? c.a_gap : c.n_gap),
               num(a ? kNaN : c.n_split)});
    }
    out.write("phase_diagram_" + which + ".csv", csv.str());
  }
  if (do_analytic && do_numeric) {
    int agree = 0, off_band = 0;
    for (int idx = 0; idx < nb * nh; ++idx) {
      const double beta = betas[idx / nh], h = hs[idx % nh];
      const double c = std::cosh(2 * beta) * std::cos(2 * h);
      // Cells within `band` of the analytic boundary are excluded.
      if (std::abs(std::abs(c) - 1.0) < band) continue;
      ++off_band;
      if (cells[idx].analytic == cells[idx].numeric) ++agree;
    }
    summary["cells_off_band"] = off_band;
    summary["agreeing_off_band"] = agree;
  }
  return summary;
}

// ---------------------------------------------------------------- entanglement

LinearFit log_sine_fit(const std::vector<double>& s, int L, int lo, int hi) {
  std::vector<double> x, y;
  for (int la = lo; la <= hi; ++la) {
    x.push_back(std::log(std::sin(std::numbers::pi * la / L)));
    y.push_back(s[la - 1]);
  }
  return fit_line(x, y);
}

json run_entanglement(const RunConfig& cfg, Output& out, int workers) {
  const json& o = cfg.options;
  const std::vector<double> betas = opt_list(o, "beta_values", {cfg.model.beta});
  const int parity = opt(o, "parity", +1);
  std::vector<std::vector<double>> profiles(betas.size());
  parallel_for(static_cast<int>(betas.size()), workers, [&](int i) {
    ModelParams p = cfg.model;
    p.beta = betas[i];
    const QuasiSpectrum s = quasi_energies(build_floquet_matrix(p));
    profiles[i] = entropy_profile(steady_state_in_sector(s, parity));
  });
  const int L = cfg.model.L;
  json list = json::array();
  for (std::size_t i = 0; i < betas.size(); ++i) {
    CsvWriter csv({"L_A", "S"});
    for (int la = 1; la < L; ++la) csv.row({num(la), num(profiles[i][la - 1])});
    const std::string name = "entropy_" + std::to_string(i) + ".csv";
    out.write(name, csv.str());
    const LinearFit f = log_sine_fit(profiles[i], L, std::max(1, L / 8), std::min(L - 1, 7 * L / 8));
    double spread = 0.0;
    for (int la = std::max(1, L / 8); la <= std::min(L - 1, 7 * L / 8); ++la)
      spread = std::max(spread, std::abs(profiles[i][la - 1] - profiles[i][L / 2 - 1]));
    list.push_back({{"file", name},
                    {"beta", betas[i]},
                    {"a", f.intercept},
                    {"c", f.slope},
                    {"r2", f.r2},
                    {"max_deviation_from_half_cut", spread}});
  }
  json summary{{"parity", parity}, {"scans", list}};
  out.write_json("entropy_report.json", summary);
  return summary;
}

// ---------------------------------------------------------------- verify

json check(const std::string& name, double value, double tol) {
  return {{"name", name}, {"value", value}, {"tol", tol}, {"pass", std::isfinite(value) && value <= tol}};
}

json run_verify(const RunConfig& cfg, Output& out, int) {
  ModelParams p = cfg.model;
  p.bc = Boundary::Open;
  p.j_yy.assign(p.j_yy.size(), 0.0);
  p.disorder.kind = DisorderKind::None;
  p = p.resized(p.L);
  check_oracle_size(p.L, 8);
  const int steps = opt(cfg.options, "steps", 30);
  const double tol = opt(cfg.options, "tol", 1e-7);
  std::vector<bool> occ(p.L, false);
  for (int j = 0; j < p.L; j += 3) occ[j] = true;

  json checks = json::array();
  CorrelationState g = initial_fock_state(occ);
  DenseState d = y_fock_state(occ);
  const Propagator prop(build_floquet_matrix(p));
  double cm_err = 0, y_err = 0, zz_err = 0, par_err = 0, s_err = 0;
  for (int t = 0; t <= steps; ++t) {
    const Measurement m = measure(d);
    const Observables ob = observables(g);
    cm_err = std::max(cm_err, (m.majorana - g.majorana_correlation()).cwiseAbs().maxCoeff());
    for (int j = 0; j < p.L; ++j) y_err = std::max(y_err, std::abs(m.y[j] - ob.y[j]));
    for (int j = 0; j < p.L; ++j)
      for (int k = j + 1; k < p.L; ++k) zz_err = std::max(zz_err, std::abs(m.zz(j, k).real() - string_correlator(g, j, k).real()));
    par_err = std::max(par_err, std::abs(m.parity - ob.parity));
    for (int cut = 1; cut < p.L; ++cut)
      s_err = std::max(s_err, std::abs(oracle_entropy(d, cut) - entanglement_entropy(g, cut)));
    if (t < steps) {
      g = step(g, prop);
      d = apply_floquet(d, p, t);
    }
  }
  checks.push_back(check("majorana_correlation", cm_err, tol));
  checks.push_back(check("y_expectation", y_err, tol));
  checks.push_back(check("string_correlator", zz_err, tol));
  checks.push_back(check("parity", par_err, tol));
  checks.push_back(check("entropy", s_err, tol));

  const QuasiSpectrum s = quasi_energies(build_floquet_matrix(p));
  const ManyBodySpectrum spec = spectral_decompose(p);
  const int sector = fock_parity(occ);
  const CorrelationState gs = steady_state_in_sector(s, sector);
  const DenseState ds = oracle_steady_state(spec, sector);
  checks.push_back(check("steady_state_overlap", std::abs(overlap_magnitude(g, gs) - oracle_overlap(d, ds)), tol));
  checks.push_back(check("steady_state_correlation", (measure(ds).majorana - gs.majorana_correlation()).cwiseAbs().maxCoeff(), tol));

  const auto products = free_fermion_products(s, spec.values.front());
  double worst = 0.0;
  for (cplx v : spec.values) {
    double best = INFINITY;
    for (cplx q : products) best = std::min(best, std::abs(v - q) / std::abs(v));
    worst = std::max(worst, best);
  }
  checks.push_back(check("many_body_products", worst, 1e-8));

  const CubicSignReport sign = resolve_cubic_sign();
  checks.push_back(check("ode_cubic_sign", std::min(sign.error_plus, sign.error_minus), 1e-6));
  CorrelationState a = initial_fock_state(occ), b = a;
  double ode_err = 0.0;
  for (int t = 0; t < 20; ++t) {
    a = step(a, prop);
    b = step_ode(b, p, t);
    ode_err = std::max(ode_err, (a.correlation() - b.correlation()).cwiseAbs().maxCoeff());
  }
  checks.push_back(check("ode_vs_map", ode_err, 1e-6));

  bool all = true;
  for (const auto& c : checks) all = all && c.at("pass").get<bool>();
  json summary{{"L", p.L},
               {"steps", steps},
               {"checks", checks},
               {"all_pass", all},
               {"cubic_sign", {{"printed", sign.printed_sign},
                               {"chosen", sign.chosen_sign},
                               {"error_plus", sign.error_plus},
                               {"error_minus", sign.error_minus},
                               {"consistent", sign.consistent}}}};
  out.write_json("verify_summary.json", summary);
  return summary;
}

std::string iso_time_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_error(const fs::path& out, const Error& e, int code) {
  const json err{{"error", {{"kind", e.kind() == ErrorKind::Config ? "config" : "numerical"},
                            {"code", e.code()},
                            {"message", e.what()},
                            {"exit_code", code}}}};
  std::cerr << err.dump() << "\n";
  try {
    fs::create_directories(out);
    write_atomic(out / "error.json", err.dump(2) + "\n");
  } catch (const std::exception&) {
    // The error has already been reported on stderr.
  }
}

}  // namespace

std::string to_string(Task task) {
  switch (task) {
    case Task::Spectrum: return "spectrum";
    case Task::Edge: return "edge";
    case Task::Dynamics: return "dynamics";
    case Task::PhaseDiagram: return "phase-diagram";
    case Task::Entanglement: return "entanglement";
    case Task::Verify: return "verify";
  }
  return "spectrum";
}

std::string to_string(Engine engine) {
  switch (engine) {
    case Engine::Gaussian: return "gaussian";
    case Engine::Exact: return "exact";
    case Engine::Both: return "both";
  }
  return "gaussian";
}

RunConfig parse_config(const json& doc, const Overrides& overrides) {
  if (!doc.is_object()) throw ConfigError("InvalidConfig", "config must be a JSON object");
  RunConfig cfg;
  try {
    cfg.task = task_from_string(doc.at("task").get<std::string>());
    json model = doc.at("model");
    if (overrides.seed) model["seed"] = *overrides.seed;
    cfg.model = model.get<ModelParams>();
    cfg.engine = engine_from_string(overrides.engine.value_or(doc.value("engine", std::string("gaussian"))));
    if (doc.contains("options")) cfg.options = doc.at("options");
  } catch (const json::exception& e) {
    throw ConfigError("InvalidConfig", e.what());
  }
  if (!cfg.options.is_object()) throw ConfigError("InvalidConfig", "options must be an object");
  if (cfg.engine != Engine::Gaussian) check_oracle_size(cfg.model.L);
  if (cfg.engine != Engine::Exact && cfg.model.has_yy() && cfg.task == Task::Dynamics)
    throw ConfigError("UnsupportedCouplings", "the Gaussian engine needs j_yy = 0; use --engine exact");
  return cfg;
}

json to_json(const RunConfig& cfg) {
  return {{"task", to_string(cfg.task)}, {"model", cfg.model}, {"engine", to_string(cfg.engine)}, {"options", cfg.options}};
}

RunResult run(const RunConfig& cfg, const fs::path& out_dir, int workers) {
  fs::create_directories(out_dir);
  Output out{out_dir, {}, {}};
  RunResult r;
  switch (cfg.task) {
    case Task::Spectrum: r.summary = run_spectrum(cfg, out, workers); break;
    case Task::Edge: r.summary = run_edge(cfg, out, workers); break;
    case Task::Dynamics: r.summary = run_dynamics(cfg, out, workers); break;
    case Task::PhaseDiagram: r.summary = run_phase_diagram(cfg, out, workers); break;
    case Task::Entanglement: r.summary = run_entanglement(cfg, out, workers); break;
    case Task::Verify: r.summary = run_verify(cfg, out, workers); break;
  }
  r.files = out.files;
  std::sort(r.files.begin(), r.files.end());
  return r;
}

int run_from_file(const fs::path& config, const fs::path& out, int workers, const Overrides& overrides) {
  const auto started = std::chrono::steady_clock::now();
  const std::string started_at = iso_time_utc();
  try {
    std::ifstream in(config);
    if (!in) throw ConfigError("ConfigNotFound", "cannot open " + config.string());
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError("InvalidConfig", e.what());
    }
    const RunConfig cfg = parse_config(doc, overrides);
    const RunResult result = run(cfg, out, workers);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    const json manifest{{"config", to_json(cfg)},
                        {"config_path", config.string()},
                        {"seed", cfg.model.seed},
                        {"disorder_seed", cfg.model.disorder.seed},
                        {"library_version", NUFLOQUET_VERSION},
                        {"workers", workers},
                        {"started_at", started_at},
                        {"wall_time_s", wall},
                        {"files", result.files},
                        {"summary", result.summary}};
    write_atomic(out / "manifest.json", manifest.dump(2) + "\n");
    return 0;
  } catch (const ConfigError& e) {
    write_error(out, e, 2);
    return 2;
  } catch (const NumericalError& e) {
    write_error(out, e, 3);
    return 3;
  }
}

void write_atomic(const fs::path& path, const std::string& contents) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("OutputNotWritable", "cannot write " + tmp.string());
    f << contents;
    if (!f) throw ConfigError("OutputNotWritable", "write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

void parallel_for(int n, int workers, const std::function<void(int)>& body) {
  if (n <= 0) return;
  const int threads = std::clamp(workers, 1, n);
  if (threads == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(mu);
          if (!first) first = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (first) std::rethrow_exception(first);
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace nufloquet::cli
