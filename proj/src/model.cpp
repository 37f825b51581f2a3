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

#include "nufloquet/model.hpp"

#include <cmath>

#include "nufloquet/error.hpp"

namespace nufloquet {

namespace {

bool any_nonzero(const std::vector<double>& v) {
  for (double x : v)
    if (x != 0.0) return true;
  return false;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::vector<double> read_couplings(const nlohmann::json& j, const char* key, std::size_t n) {
  if (!j.contains(key) || j.at(key).is_null()) return std::vector<double>(n, 0.0);
  const auto& v = j.at(key);
  if (v.is_number()) return std::vector<double>(n, v.get<double>());
  if (!v.is_array()) throw ConfigError("InvalidParams", std::string(key) + " must be a number or array");
  auto out = v.get<std::vector<double>>();
  if (out.size() != n)
    throw ConfigError("InvalidParams", std::string(key) + " has length " + std::to_string(out.size()) +
                                           ", expected " + std::to_string(n));
  return out;
}

}  // namespace

std::string to_string(Boundary bc) {
  switch (bc) {
    case Boundary::Open: return "open";
    case Boundary::Periodic: return "periodic";
    case Boundary::Antiperiodic: return "antiperiodic";
  }
  return "open";
}

std::string to_string(DisorderKind kind) {
  switch (kind) {
    case DisorderKind::None: return "none";
    case DisorderKind::Quenched: return "quenched";
    case DisorderKind::Stochastic: return "stochastic";
  }
  return "none";
}

Boundary boundary_from_string(const std::string& s) {
  if (s == "open") return Boundary::Open;
  if (s == "periodic") return Boundary::Periodic;
  if (s == "antiperiodic") return Boundary::Antiperiodic;
  throw ConfigError("InvalidBoundary", "unknown boundary condition '" + s + "'");
}

DisorderKind disorder_kind_from_string(const std::string& s) {
  if (s == "none") return DisorderKind::None;
  if (s == "quenched") return DisorderKind::Quenched;
  if (s == "stochastic") return DisorderKind::Stochastic;
  throw ConfigError("InvalidParams", "unknown disorder kind '" + s + "'");
}

bool ModelParams::has_yy() const { return any_nonzero(j_yy); }
bool ModelParams::has_zz_phase() const { return any_nonzero(j_zz); }
bool ModelParams::has_xx() const { return any_nonzero(j_xx); }

void ModelParams::validate() const {
  if (L < 2) throw ConfigError("InvalidParams", "L must be at least 2");
  if (!std::isfinite(beta) || beta < 0.0) throw ConfigError("InvalidParams", "beta must be finite and >= 0");
  const std::size_t nb = static_cast<std::size_t>(bond_count());
  auto check = [&](const std::vector<double>& v, std::size_t n, const char* name) {
    if (v.size() != n)
      throw ConfigError("InvalidParams", std::string(name) + " has length " + std::to_string(v.size()) +
                                             ", expected " + std::to_string(n));
    for (double x : v)
      if (!std::isfinite(x)) throw ConfigError("InvalidParams", std::string(name) + " has a non-finite entry");
  };
  check(j_xx, nb, "j_xx");
  check(j_zz, nb, "j_zz");
  check(j_yy, nb, "j_yy");
  check(h_y, static_cast<std::size_t>(L), "h_y");
  if (disorder.kind != DisorderKind::None) {
    if (!std::isfinite(disorder.mean) || !std::isfinite(disorder.delta) || disorder.delta < 0.0)
      throw ConfigError("InvalidParams", "disorder mean must be finite and delta >= 0");
  }
}

ModelParams ModelParams::resized(int new_L) const {
  auto first_uniform = [](const std::vector<double>& v, const char* name) {
    for (double x : v)
      if (x != v.front()) throw ConfigError("InvalidParams", std::string(name) + " is not uniform; cannot resize");
    return v.empty() ? 0.0 : v.front();
  };
  ModelParams out = uniform(new_L, beta, first_uniform(h_y, "h_y"), first_uniform(j_xx, "j_xx"),
                            first_uniform(j_zz, "j_zz"), bc, first_uniform(j_yy, "j_yy"));
  out.disorder = disorder;
  out.seed = seed;
  out.yy_placement = yy_placement;
  return out;
}

ModelParams ModelParams::uniform(int L, double beta, double h_y, double j_xx, double j_zz, Boundary bc,
                                 double j_yy) {
  ModelParams p;
  p.L = L;
  p.beta = beta;
  p.bc = bc;
  const int nb = p.bond_count();
  p.j_xx.assign(nb, j_xx);
  p.j_zz.assign(nb, j_zz);
  p.j_yy.assign(nb, j_yy);
  p.h_y.assign(L, h_y);
  return p;
}

void to_json(nlohmann::json& j, const ModelParams& p) {
  j = nlohmann::json{{"L", p.L},
                     {"beta", p.beta},
                     {"j_xx", p.j_xx},
                     {"j_zz", p.j_zz},
                     {"j_yy", p.j_yy},
                     {"h_y", p.h_y},
                     {"bc", to_string(p.bc)},
                     {"disorder",
                      {{"kind", to_string(p.disorder.kind)},
                       {"mean", p.disorder.mean},
                       {"delta", p.disorder.delta},
                       {"seed", p.disorder.seed}}},
                     {"seed", p.seed},
                     {"yy_placement", p.yy_placement == YYPlacement::AfterXX ? "after_xx" : "before_xx"}};
}

void from_json(const nlohmann::json& j, ModelParams& p) {
  if (!j.is_object()) throw ConfigError("InvalidParams", "model must be a JSON object");
  if (!j.contains("L")) throw ConfigError("InvalidParams", "model.L is required");
  p = ModelParams{};
  p.L = j.at("L").get<int>();
  p.beta = j.value("beta", 0.0);
  p.bc = boundary_from_string(j.value("bc", std::string("open")));
  if (p.L < 2) throw ConfigError("InvalidParams", "L must be at least 2");
  const std::size_t nb = static_cast<std::size_t>(p.bond_count());
  p.j_xx = read_couplings(j, "j_xx", nb);
  p.j_zz = read_couplings(j, "j_zz", nb);
  p.j_yy = read_couplings(j, "j_yy", nb);
  p.h_y = read_couplings(j, "h_y", static_cast<std::size_t>(p.L));
  if (j.contains("disorder") && !j.at("disorder").is_null()) {
    const auto& d = j.at("disorder");
    p.disorder.kind = disorder_kind_from_string(d.value("kind", std::string("none")));
    p.disorder.mean = d.value("mean", 0.0);
    p.disorder.delta = d.value("delta", 0.0);
    p.disorder.seed = d.value("seed", std::uint64_t{0});
  }
  p.seed = j.value("seed", std::uint64_t{0});
  const std::string placement = j.value("yy_placement", std::string("after_xx"));
  if (placement == "after_xx")
    p.yy_placement = YYPlacement::AfterXX;
  else if (placement == "before_xx")
    p.yy_placement = YYPlacement::BeforeXX;
  else
    throw ConfigError("InvalidParams", "yy_placement must be after_xx or before_xx");
  p.validate();
}

double disorder_draw(std::uint64_t seed, int site, std::int64_t step) {
  std::uint64_t x = splitmix64(seed);
  x = splitmix64(x ^ static_cast<std::uint64_t>(site));
  x = splitmix64(x ^ static_cast<std::uint64_t>(step));
  const double u = static_cast<double>(x >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

std::vector<double> field_sequence(const ModelParams& p, std::int64_t step) {
  if (p.disorder.kind == DisorderKind::None) return p.h_y;
  const std::uint64_t key = p.disorder.seed ^ splitmix64(p.seed);
  const std::int64_t t = p.disorder.kind == DisorderKind::Quenched ? 0 : step;
  std::vector<double> h(p.L);
  for (int j = 0; j < p.L; ++j) h[j] = p.disorder.mean + p.disorder.delta * disorder_draw(key, j, t);
  return h;
}

namespace majorana {
std::string label(int index) {
  return std::string(index % 2 == 0 ? "b" : "a") + std::to_string(index / 2 + 1);
}
}  // namespace majorana

std::string canonical_ordering() {
  return "index 2j-2 -> b_j, index 2j-1 -> a_j (sites j = 1..L, 0-based indices); "
         "a term c*i*g_mu*g_nu contributes H[mu][nu] = 2ic, H[nu][mu] = -2ic under H = g^T H g / 4";
}

MajoranaMatrix MajoranaMatrix::from_dense(const Matrix& h, double tol) {
  if (h.rows() != h.cols() || h.rows() % 2 != 0)
    throw ConfigError("NonAntisymmetricInput", "matrix must be square with even dimension");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h + h.transpose()).cwiseAbs().maxCoeff() > tol * scale)
    throw ConfigError("NonAntisymmetricInput", "matrix is not antisymmetric within tolerance");
  MajoranaMatrix m(static_cast<int>(h.rows()));
  for (int i = 0; i < h.rows(); ++i)
    for (int k = i + 1; k < h.cols(); ++k) {
      const cplx v = 0.5 * (h(i, k) - h(k, i));
      if (v != cplx(0.0)) m.entries_.push_back({i, k, v});
    }
  return m;
}

void MajoranaMatrix::add_term(int mu, int nu, cplx c) {
  if (mu == nu) throw ConfigError("InvalidParams", "a Majorana bond needs two distinct indices");
  if (mu > nu) {
    std::swap(mu, nu);
    c = -c;
  }
  const cplx v = 2.0 * kI * c;
  for (auto& e : entries_)
    if (e.row == mu && e.col == nu) {
      e.value += v;
      return;
    }
  entries_.push_back({mu, nu, v});
}

cplx MajoranaMatrix::operator()(int row, int col) const {
  for (const auto& e : entries_) {
    if (e.row == row && e.col == col) return e.value;
    if (e.row == col && e.col == row) return -e.value;
  }
  return 0.0;
}

Matrix MajoranaMatrix::dense() const {
  Matrix h = Matrix::Zero(dim_, dim_);
  for (const auto& e : entries_) {
    h(e.row, e.col) += e.value;
    h(e.col, e.row) -= e.value;
  }
  return h;
}

std::vector<std::pair<int, int>> bond_sites(const ModelParams& p) {
  std::vector<std::pair<int, int>> bonds;
  for (int j = 0; j + 1 < p.L; ++j) bonds.emplace_back(j, j + 1);
  if (p.closed()) bonds.emplace_back(p.L - 1, 0);
  return bonds;
}

namespace {

double wrap_sign(const ModelParams& p, int bond) {
  if (bond < p.L - 1) return 1.0;
  return p.bc == Boundary::Antiperiodic ? -1.0 : 1.0;
}

}  // namespace

MajoranaMatrix build_h_zz(const ModelParams& p) {
  MajoranaMatrix h(2 * p.L);
  const auto bonds = bond_sites(p);
  for (std::size_t n = 0; n < bonds.size(); ++n)
    h.add_term(majorana::b(bonds[n].first), majorana::a(bonds[n].second), -wrap_sign(p, static_cast<int>(n)));
  return h;
}

MajoranaMatrix build_h_xx(const ModelParams& p) {
  MajoranaMatrix h(2 * p.L);
  const auto bonds = bond_sites(p);
  for (std::size_t n = 0; n < bonds.size(); ++n)
    h.add_term(majorana::a(bonds[n].first), majorana::b(bonds[n].second), wrap_sign(p, static_cast<int>(n)));
  return h;
}

FieldTerm build_h_y(const ModelParams& p, std::int64_t step) {
  FieldTerm out{MajoranaMatrix(2 * p.L), field_sequence(p, step)};
  for (int j = 0; j < p.L; ++j) out.matrix.add_term(majorana::b(j), majorana::a(j), 1.0);
  return out;
}

}  // namespace nufloquet
