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

// Spreading-support geometry on the grids
//
//   R_{K,L} + (m / K, n K / L),   R_{K,L} = [0, 1/K) x [0, K/L),
//
// whose cells have area 1/L: inner and outer Jordan content, rectification
// of a support into a cover of fewer than L cells, and the dilation plus
// translation that brings a support into [0, 1) x [0, K).

#ifndef OPWS_GEOMETRY_HPP_
#define OPWS_GEOMETRY_HPP_

#include <functional>
#include <optional>
#include <vector>

#include "opws/model.hpp"
#include "opws/support.hpp"

namespace opws {

/// Cell (m, n) of the (K, L) grid.
Rect grid_cell(int K, int L, long long m, long long n);

enum class ContentSide { kInner, kOuter };

struct ContentOptions {
  int Kmax = 64;
  int Lmax = 64;
  /// Restricts L to this set when non-empty (e.g. primes).
  std::vector<int> Lset;
};

struct ContentResult {
  double value = 0.0;
  int bestK = 0;
  int bestL = 0;
};

/// Inner content: max over the grids of (cells inside M) / L.
/// Outer content: min over the grids of (cells meeting M) / L.
/// Ties keep the smallest K, then the smallest L.
ContentResult content(const SupportSet& M, ContentSide side, const ContentOptions& opts = {});

struct CellCover {
  int K = 1;
  int L = 1;
  Rational eps;
  /// (m, n) pairs in row-major order (m outer, n inner).
  std::vector<std::pair<int, int>> cells;

  Rect cell(std::size_t j) const;
  double area() const { return static_cast<double>(cells.size()) / L; }
  SupportSet as_support() const;
};

/// Default epsilon grid {2^-i : i = 3..10}.
std::vector<Rational> default_eps_grid();
std::vector<int> primes_up_to(int n);

/// Finds a cover of M_eps = M + [-eps/2, eps/2)^2 by fewer than L cells of
/// the (K, L) grid with M_eps inside [0, 1) x [0, K) and L >= K.
/// Scans L ascending through `Lcandidates`; for the first L that admits a
/// cover, picks the largest eps from `eps_grid` (falling back to eps = 0),
/// then the fewest cells, then the smallest K. Throws InfeasibleError.
CellCover rectify(const SupportSet& M, const std::vector<int>& Lcandidates,
                  const std::vector<Rational>& eps_grid = default_eps_grid());

struct SupportNormalization {
  SupportSet normalized;
  /// Dilation (t, nu) -> (t / a, a nu), applied after the translation.
  Rational a{1};
  Rational t0{0};
  Rational nu0{0};
  /// Smallest integer K with normalized set inside [0, 1) x [0, K).
  int K = 1;
};

/// Identity when M already lies in [0, 1) x [0, inf). Otherwise translates
/// the bounding box to the origin and, if its time extent exceeds 1,
/// dilates by that extent. Throws DomainError on empty or zero-extent sets.
SupportNormalization normalize_support(const SupportSet& M);

/// Carries an identifier for the normalized support back to the original
/// one: spacing and offset scale by a, then the train is translated by t0
/// and modulated by nu0.
DeltaTrain transport_identifier(const DeltaTrain& g, const SupportNormalization& nz);

}  // namespace opws

#endif  // OPWS_GEOMETRY_HPP_
