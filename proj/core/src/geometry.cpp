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

#include "opws/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace opws {

Rect grid_cell(int K, int L, long long m, long long n) {
  if (K < 1 || L < 1) throw DomainError("grid needs K, L >= 1");
  return {Rational(m, K), Rational(m + 1, K), Rational(n * K, L), Rational((n + 1) * K, L)};
}

namespace {

// Cell index ranges [m0, m1) x [n0, n1) of the (K, L) grid meeting the box.
struct CellRange {
  long long m0, m1, n0, n1;
};

CellRange cells_over(const Rect& box, int K, int L) {
  const Rational ht(K, L);
  return {(box.t0 * Rational(K)).floor(), (box.t1 * Rational(K)).ceil(), (box.nu0 / ht).floor(),
          (box.nu1 / ht).ceil()};
}

std::int64_t count_cells(const SupportSet& M, const Rect& box, int K, int L, ContentSide side) {
  const CellRange r = cells_over(box, K, L);
  std::int64_t count = 0;
  for (long long m = r.m0; m < r.m1; ++m) {
    for (long long n = r.n0; n < r.n1; ++n) {
      const Rect cell = grid_cell(K, L, m, n);
      if (side == ContentSide::kInner ? M.covers_cell(cell) : M.meets_cell(cell)) ++count;
    }
  }
  return count;
}

}  // namespace

ContentResult content(const SupportSet& M, ContentSide side, const ContentOptions& opts) {
  if (opts.Kmax < 1 || opts.Lmax < 1) throw DomainError("content budget needs Kmax, Lmax >= 1");
  const auto box = M.bounds();
  if (!box) return {0.0, 1, 1};
  std::vector<int> Ls;
  if (opts.Lset.empty()) {
    for (int L = 1; L <= opts.Lmax; ++L) Ls.push_back(L);
  } else {
    for (int L : opts.Lset) {
      if (L >= 1 && L <= opts.Lmax) Ls.push_back(L);
    }
    std::sort(Ls.begin(), Ls.end());
    Ls.erase(std::unique(Ls.begin(), Ls.end()), Ls.end());
  }
  ContentResult best;
  bool have = false;
  for (int K = 1; K <= opts.Kmax; ++K) {
    for (int L : Ls) {
      const double v = static_cast<double>(count_cells(M, *box, K, L, side)) / L;
      const bool better = !have || (side == ContentSide::kInner ? v > best.value : v < best.value);
      if (better) {
        best = {v, K, L};
        have = true;
      }
    }
  }
  return best;
}

Rect CellCover::cell(std::size_t j) const {
  return grid_cell(K, L, cells.at(j).first, cells.at(j).second);
}

SupportSet CellCover::as_support() const {
  std::vector<Rect> rects;
  for (std::size_t j = 0; j < cells.size(); ++j) rects.push_back(cell(j));
  return SupportSet::rectangles(std::move(rects));
}

std::vector<Rational> default_eps_grid() {
  std::vector<Rational> out;
  for (int i = 3; i <= 10; ++i) out.emplace_back(1, std::int64_t{1} << i);
  return out;
}

std::vector<int> primes_up_to(int n) {
  std::vector<int> out;
  for (int p = 2; p <= n; ++p) {
    bool prime = true;
    for (int d = 2; d * d <= p; ++d) {
      if (p % d == 0) {
        prime = false;
        break;
      }
    }
    if (prime) out.push_back(p);
  }
  return out;
}

CellCover rectify(const SupportSet& M, const std::vector<int>& Lcandidates,
                  const std::vector<Rational>& eps_grid) {
  if (M.empty()) throw DomainError("cannot rectify an empty support");
  std::vector<int> Ls(Lcandidates);
  std::sort(Ls.begin(), Ls.end());
  Ls.erase(std::unique(Ls.begin(), Ls.end()), Ls.end());
  std::vector<Rational> eps(eps_grid);
  std::sort(eps.begin(), eps.end(), [](const Rational& a, const Rational& b) { return b < a; });
  if (eps.empty() || !(eps.back() == Rational(0))) eps.emplace_back(0);

  for (int L : Ls) {
    if (L < 1) continue;
    for (const Rational& e : eps) {
      if (e < Rational(0)) continue;
      const SupportSet Me = e == Rational(0) ? M : M.enlarged(e);
      const auto box = Me.bounds();
      if (!box || box->t0 < Rational(0) || Rational(1) < box->t1 || box->nu0 < Rational(0)) continue;
      std::optional<CellCover> best;
      for (int K = 1; K <= L; ++K) {
        if (Rational(K) < box->nu1) continue;
        const CellRange r = cells_over(*box, K, L);
        CellCover cover{K, L, e, {}};
        for (long long m = r.m0; m < r.m1 && static_cast<int>(cover.cells.size()) < L; ++m) {
          for (long long n = r.n0; n < r.n1; ++n) {
            if (Me.meets_cell(grid_cell(K, L, m, n))) {
              cover.cells.emplace_back(static_cast<int>(m), static_cast<int>(n));
            }
          }
        }
        if (static_cast<int>(cover.cells.size()) >= L) continue;
        if (!best || cover.cells.size() < best->cells.size()) best = std::move(cover);
      }
      if (best) return *best;
    }
  }
  throw InfeasibleError("infeasible: no (K, L, eps) in the search range gives a cover with fewer than L cells");
}

SupportNormalization normalize_support(const SupportSet& M) {
  const auto box = M.bounds();
  if (!box) throw DomainError("cannot normalize an empty support");
  const Rational extent = box->t1 - box->t0;
  if (!(Rational(0) < extent) || !(box->nu0 < box->nu1)) {
    throw DomainError("support has zero extent");
  }
  SupportNormalization out;
  if (Rational(0) <= box->t0 && box->t1 <= Rational(1) && Rational(0) <= box->nu0) {
    out.normalized = M;
    out.K = static_cast<int>(std::max<std::int64_t>(1, box->nu1.ceil()));
    return out;
  }
  out.t0 = box->t0;
  out.nu0 = box->nu0;
  out.a = Rational(1) < extent ? extent : Rational(1);
  out.normalized = M.transformed(out.a, out.t0, out.nu0);
  out.K = static_cast<int>(std::max<std::int64_t>(1, (out.a * (box->nu1 - box->nu0)).ceil()));
  return out;
}

DeltaTrain transport_identifier(const DeltaTrain& g, const SupportNormalization& nz) {
  const double a = nz.a.to_double();
  const double t0 = nz.t0.to_double();
  const double mu = g.modulation / a;
  CVector w = g.weights;
  if (mu != 0.0 && t0 != 0.0) {
    const cplx phase = cis2pi(-mu * t0);
    for (auto& v : w) v *= phase;
  }
  return DeltaTrain(g.spacing * a, g.offset * a + t0, std::move(w), mu + nz.nu0.to_double());
}

}  // namespace opws
