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

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "nufloquet/types.hpp"

namespace nufloquet {

enum class Boundary { Open, Periodic, Antiperiodic };
enum class DisorderKind { None, Quenched, Stochastic };

// Where the YY interaction gate sits inside the unitary part of the drive.
// Only the dense engine supports YY couplings.
enum class YYPlacement { AfterXX, BeforeXX };

std::string to_string(Boundary bc);
std::string to_string(DisorderKind kind);
Boundary boundary_from_string(const std::string& s);
DisorderKind disorder_kind_from_string(const std::string& s);

struct DisorderSpec {
  DisorderKind kind = DisorderKind::None;
  double mean = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
};

struct ModelParams {
  int L = 2;
  double beta = 0.0;
  std::vector<double> j_xx;
  std::vector<double> j_zz;
  std::vector<double> j_yy;
  std::vector<double> h_y;
  Boundary bc = Boundary::Open;
  DisorderSpec disorder;
  std::uint64_t seed = 0;
  YYPlacement yy_placement = YYPlacement::AfterXX;

  bool closed() const { return bc != Boundary::Open; }
  int bond_count() const { return closed() ? L : L - 1; }
  bool has_yy() const;
  bool has_zz_phase() const;
  bool has_xx() const;

  // Throws ConfigError("InvalidParams") on shape or value violations.
  void validate() const;

  // Same couplings on a chain of a different length. Requires uniform
  // couplings and fields; throws ConfigError("InvalidParams") otherwise.
  ModelParams resized(int new_L) const;

  // Uniform couplings on every bond and site.
  static ModelParams uniform(int L, double beta, double h_y, double j_xx = 0.0,
                             double j_zz = 0.0, Boundary bc = Boundary::Open,
                             double j_yy = 0.0);
};

void to_json(nlohmann::json& j, const ModelParams& p);
void from_json(const nlohmann::json& j, ModelParams& p);

// Counter-based uniform draw in [-1, 1], keyed by (seed, site, step).
double disorder_draw(std::uint64_t seed, int site, std::int64_t step);

// Per-site Y fields at a given step, with disorder applied.
// When disorder is active the field is mean + delta * draw and h_y is ignored.
std::vector<double> field_sequence(const ModelParams& p, std::int64_t step);

// Canonical Majorana indexing: site j (0-based) owns b at 2j and a at 2j+1.
namespace majorana {
inline int b(int site) { return 2 * site; }
inline int a(int site) { return 2 * site + 1; }
std::string label(int index);
}  // namespace majorana

std::string canonical_ordering();

struct MajoranaEntry {
  int row;
  int col;
  cplx value;
};

// Complex antisymmetric 2L x 2L matrix stored as its independent entries.
// Entry (row, col, v) means H[row][col] = v and H[col][row] = -v.
class MajoranaMatrix {
 public:
  explicit MajoranaMatrix(int dim = 0) : dim_(dim) {}

  // Validates antisymmetry to tol relative to the max entry.
  static MajoranaMatrix from_dense(const Matrix& h, double tol = 1e-12);

  // Adds the operator term c * i * g_mu g_nu.
  void add_term(int mu, int nu, cplx c);

  int dim() const { return dim_; }
  const std::vector<MajoranaEntry>& entries() const { return entries_; }
  cplx operator()(int row, int col) const;
  Matrix dense() const;

 private:
  int dim_;
  std::vector<MajoranaEntry> entries_;
};

MajoranaMatrix build_h_zz(const ModelParams& p);
MajoranaMatrix build_h_xx(const ModelParams& p);

struct FieldTerm {
  MajoranaMatrix matrix;
  std::vector<double> fields;
};

FieldTerm build_h_y(const ModelParams& p, std::int64_t step);

// Bond endpoints in builder order, wrap bond last on closed chains.
std::vector<std::pair<int, int>> bond_sites(const ModelParams& p);

}  // namespace nufloquet
