// Copyright 2026 The opws Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Finite Weyl-Heisenberg systems on Z_L.
//
// (pi(k, l) c)_j = c_{(j - k) mod L} e^{2 pi i j l / L}
//
// A vector c is in general linear position (GLP) when every L of the L^2
// vectors pi(k, l) c are linearly independent. For prime L this holds for
// almost every c, which makes c an identifier for every channel whose
// spreading pattern has at most L cells.

#ifndef OPWS_GABOR_HPP_
#define OPWS_GABOR_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "opws/common.hpp"

namespace opws {

/// A time-frequency cell (k, l) of Z_L x Z_L.
struct Cell {
  int k = 0;
  int l = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Distinct cells; throws DomainError on duplicates (after reduction mod L
/// when L is given).
struct CellPattern {
  std::vector<Cell> cells;

  CellPattern() = default;
  explicit CellPattern(std::vector<Cell> c);
  std::size_t size() const { return cells.size(); }
};

CVector tf_shift(std::span<const cplx> c, int k, int l);

/// L x L^2 matrix; column l*L + k is tf_shift(c, k, l).
CMatrix gabor_matrix(std::span<const cplx> c);

/// Columns tf_shift(c, k_j, l_j) for the pattern's cells, in order.
CMatrix pattern_matrix(std::span<const cplx> c, const CellPattern& pattern);

enum class GlpMode { kExhaustive, kRandomized, kNone };

struct GlpOptions {
  GlpMode mode = GlpMode::kExhaustive;
  std::uint64_t trials = 1'000'000;  // randomized mode
  std::uint64_t seed = 0;            // randomized mode
  /// Exhaustive mode refuses when C(L^2, L) exceeds this.
  std::uint64_t budget = 10'000'000;
  /// Singular iff |det| <= rel_tolerance * ||c||_2^L.
  double rel_tolerance = 1e-12;
  unsigned threads = 0;
};

struct GlpCertificate {
  GlpMode mode = GlpMode::kNone;
  int L = 0;
  bool holds = false;
  double min_abs_det = 0.0;
  double worst_cond = 0.0;
  std::uint64_t subsets_checked = 0;
  /// Column indices (l*L + k) of the first subset, in colex order, whose
  /// |det| is within a relative 1e-9 of min |det|.
  std::vector<int> argmin;
  double tolerance = 0.0;
};

/// Number of L-subsets of the L^2 columns, C(L^2, L); saturates at
/// UINT64_MAX.
std::uint64_t glp_subset_count(int L);

/// Enumerates (exhaustive, colexicographic order) or samples (randomized)
/// L-subsets of the Gabor system's columns and records |det| and the
/// 2-norm condition number of each L x L submatrix. Ties in min |det| go to
/// the earliest subset in enumeration order.
GlpCertificate check_glp(std::span<const cplx> c, const GlpOptions& opts = {});

/// The k-th L-subset of {0..n-1} in colexicographic order.
std::vector<int> colex_unrank(std::uint64_t rank, int n, int L);

/// Unit-norm complex Gaussian vector drawn from stream `stream` of `seed`.
CVector random_unit_vector(int L, std::uint64_t seed, std::uint64_t stream = 0);

enum class IdentifierObjective { kMaximinDet, kMinWorstCond };

struct SearchOptions {
  int trials = 1;
  std::uint64_t seed = 0;
  IdentifierObjective objective = IdentifierObjective::kMinWorstCond;
  /// How each candidate is scored; kExhaustive or kRandomized.
  GlpOptions scoring{};
};

struct GaborIdentifier {
  int L = 0;
  CVector c;
  GlpCertificate certificate;
  /// Objective value of the winning candidate (larger is better for
  /// maximin-|det|, smaller for min-worst-cond).
  double score = 0.0;
  int candidate_index = 0;
};

/// Draws `trials` unit-norm complex Gaussian candidates (candidate i from
/// stream i of seed), scores each, and returns the best. Ties keep the
/// earlier candidate.
GaborIdentifier search_identifier(int L, const SearchOptions& opts);

/// Response of the finite channel sum_j values_j pi(k_j, l_j) to c.
CVector finite_apply(const CellPattern& pattern, std::span<const cplx> values,
                     std::span<const cplx> c);

struct FiniteSolution {
  CVector values;
  double residual = 0.0;
  double condition = 0.0;
};

/// Solves pattern_matrix(c, pattern) x = y. Throws DomainError when the
/// pattern has more than L cells and SingularSystemError when the
/// submatrix's condition number exceeds cond_cap.
FiniteSolution finite_identify(std::span<const cplx> y, const CellPattern& pattern,
                               std::span<const cplx> c, double cond_cap = 1e6);

/// 2-norm condition number sigma_max / sigma_min (infinity if singular).
double condition_number(const CMatrix& m);
double min_singular_value(const CMatrix& m);

}  // namespace opws

#endif  // OPWS_GABOR_HPP_
