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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "opws/gabor.hpp"
#include "test_util.hpp"

using namespace opws;
using opws::testing::norm2;
using opws::testing::random_vector;

namespace {

// All L-subsets of {0..n-1} in colexicographic order, by brute force.
std::vector<std::vector<int>> colex_all(int n, int L) {
  std::vector<std::vector<int>> out;
  std::vector<bool> pick(static_cast<std::size_t>(n), false);
  std::fill(pick.begin(), pick.begin() + L, true);
  do {
    std::vector<int> s;
    for (int i = 0; i < n; ++i) {
      if (pick[static_cast<std::size_t>(i)]) s.push_back(i);
    }
    out.push_back(s);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
  });
  return out;
}

cplx det2(const CMatrix& G, int a, int b) {
  return G(0, a) * G(1, b) - G(1, a) * G(0, b);
}

}  // namespace

TEST_SUITE("gabor") {

TEST_CASE("tf_shift examples") {
  const CVector e0{1.0, 0.0, 0.0, 0.0};
  const auto s = tf_shift(e0, 1, 0);
  CHECK(s == CVector{0.0, 1.0, 0.0, 0.0});
  const CVector ones(4, 1.0);
  const auto m = tf_shift(ones, 0, 1);
  const CVector expect{1.0, cplx(0, 1), -1.0, cplx(0, -1)};
  CHECK(opws::testing::max_abs_diff(m, expect) < 1e-15);
  CHECK(tf_shift(e0, 5, 0) == tf_shift(e0, 1, 0));  // reduced mod L
  CHECK(tf_shift(e0, -3, 0) == tf_shift(e0, 1, 0));
}

TEST_CASE("tf_shift factorization and unitarity") {
  for (int L : {2, 3, 5, 7}) {
    const auto c = random_vector(static_cast<std::size_t>(L), static_cast<std::uint64_t>(L));
    for (int k = 0; k < L; ++k) {
      for (int l = 0; l < L; ++l) {
        const auto a = tf_shift(tf_shift(c, k, 0), 0, l);
        CHECK(opws::testing::max_abs_diff(a, tf_shift(c, k, l)) < 1e-14);
        CHECK(std::abs(norm2(tf_shift(c, k, l)) - norm2(c)) < 1e-14);
      }
    }
  }
}

TEST_CASE("gabor matrix layout") {
  const CVector a{cplx(2, -1)};
  const auto G1 = gabor_matrix(a);
  CHECK(G1.rows() == 1);
  CHECK(G1(0, 0) == cplx(2, -1));
  const CVector c{1.0, 2.0};
  const auto G = gabor_matrix(c);
  CMatrix expect(2, 4);
  expect << 1, 2, 1, 2, 2, 1, -2, -1;
  CHECK((G - expect).norm() < 1e-15);
  const auto r = random_vector(5, 9);
  const auto G5 = gabor_matrix(r);
  for (int l = 0; l < 5; ++l) {
    for (int k = 0; k < 5; ++k) {
      const auto col = tf_shift(r, k, l);
      for (int j = 0; j < 5; ++j) CHECK(G5(j, l * 5 + k) == col[static_cast<std::size_t>(j)]);
      CHECK(G5.col(l * 5 + k).norm() == doctest::Approx(norm2(r)).epsilon(1e-14));
    }
  }
}

TEST_CASE("colexicographic unranking matches brute-force order") {
  for (auto [n, L] : {std::pair{4, 2}, std::pair{9, 3}, std::pair{10, 4}}) {
    const auto all = colex_all(n, L);
    for (std::size_t r = 0; r < all.size(); ++r) CHECK(colex_unrank(r, n, L) == all[r]);
  }
  CHECK(glp_subset_count(2) == 6);
  CHECK(glp_subset_count(3) == 84);
  CHECK(glp_subset_count(5) == 53130);
  CHECK(glp_subset_count(7) == 85900584);
}

TEST_CASE("GLP: the (1, 1) counterexample fails") {
  const CVector c{1.0, 1.0};
  const auto cert = check_glp(c);
  CHECK_FALSE(cert.holds);
  CHECK(cert.subsets_checked == 6);
  CHECK(cert.min_abs_det == 0.0);
  CHECK(cert.argmin == std::vector<int>{0, 1});  // pi(0,0)c and pi(1,0)c coincide
}

TEST_CASE("GLP: c = (1, 2) holds with determinants 3, 4, 5") {
  const CVector c{1.0, 2.0};
  const auto G = gabor_matrix(c);
  std::vector<double> dets;
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) dets.push_back(std::abs(det2(G, a, b)));
  }
  std::sort(dets.begin(), dets.end());
  const std::vector<double> expect{3, 3, 4, 4, 5, 5};
  for (std::size_t i = 0; i < 6; ++i) CHECK(dets[i] == doctest::Approx(expect[i]));
  const auto cert = check_glp(c);
  CHECK(cert.holds);
  CHECK(cert.min_abs_det == doctest::Approx(3.0));
  CHECK(cert.tolerance == doctest::Approx(5e-12));
}

TEST_CASE("GLP: seed-0 Gaussian c for L = 3 holds over all 84 subsets") {
  const auto c = random_unit_vector(3, 0);
  const auto cert = check_glp(c);
  CHECK(cert.holds);
  CHECK(cert.subsets_checked == 84);
  // Brute-force minimum over the same subsets.
  const auto G = gabor_matrix(c);
  std::vector<double> dets;
  const auto all = colex_all(9, 3);
  for (const auto& s : all) {
    CMatrix sub(3, 3);
    for (int j = 0; j < 3; ++j) sub.col(j) = G.col(s[static_cast<std::size_t>(j)]);
    dets.push_back(std::abs(sub.determinant()));
  }
  const double mn = *std::min_element(dets.begin(), dets.end());
  std::vector<int> arg;
  for (std::size_t i = 0; i < all.size() && arg.empty(); ++i) {
    if (dets[i] <= mn * (1.0 + 1e-9)) arg = all[i];
  }
  CHECK(cert.min_abs_det == doctest::Approx(mn).epsilon(1e-12));
  CHECK(cert.argmin == arg);
}

TEST_CASE("GLP verdict and argmin are scale invariant") {
  const auto c = random_unit_vector(3, 4);
  const auto base = check_glp(c);
  for (cplx alpha : {cplx(1e-3), cplx(0, 250.0), cplx(-7, 3)}) {
    CVector d(c);
    for (auto& v : d) v *= alpha;
    const auto cert = check_glp(d);
    CHECK(cert.holds == base.holds);
    CHECK(cert.argmin == base.argmin);
    CHECK(cert.min_abs_det == doctest::Approx(base.min_abs_det * std::pow(std::abs(alpha), 3)).epsilon(1e-9));
  }
}

TEST_CASE("GLP holds for almost every c at prime L") {
  for (int L : {2, 3, 5}) {
    int holds = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) holds += check_glp(random_unit_vector(L, seed)).holds ? 1 : 0;
    CHECK(holds >= 95);
  }
}

TEST_CASE("GLP certificates do not depend on the worker count") {
  const auto c = random_unit_vector(5, 0);
  GlpOptions one;
  one.threads = 1;
  GlpOptions four;
  four.threads = 4;
  const auto a = check_glp(c, one), b = check_glp(c, four);
  CHECK(a.min_abs_det == b.min_abs_det);
  CHECK(a.worst_cond == b.worst_cond);
  CHECK(a.argmin == b.argmin);
  one.mode = four.mode = GlpMode::kRandomized;
  one.trials = four.trials = 5000;
  const auto r1 = check_glp(c, one), r4 = check_glp(c, four);
  CHECK(r1.min_abs_det == r4.min_abs_det);
  CHECK(r1.argmin == r4.argmin);
  CHECK(r1.subsets_checked == 5000);
}

TEST_CASE("GLP budget and modes") {
  const auto c = random_unit_vector(7, 0);
  CHECK_THROWS_AS(check_glp(c), BudgetExceededError);
  GlpOptions none;
  none.mode = GlpMode::kNone;
  const auto cert = check_glp(c, none);
  CHECK(cert.subsets_checked == 0);
  CHECK_FALSE(cert.holds);
}

TEST_CASE("identifier search") {
  SearchOptions one;
  one.trials = 1;
  const auto a = search_identifier(3, one);
  CHECK(a.candidate_index == 0);
  CHECK(a.c == random_unit_vector(3, 0, 0));
  CHECK(a.score == a.certificate.worst_cond);

  SearchOptions opts;
  opts.trials = 50;
  const auto best = search_identifier(5, opts);
  std::vector<double> conds;
  for (int i = 0; i < 50; ++i) conds.push_back(check_glp(random_unit_vector(5, 0, static_cast<std::uint64_t>(i))).worst_cond);
  std::vector<double> sorted(conds);
  std::sort(sorted.begin(), sorted.end());
  CHECK(best.certificate.worst_cond <= sorted[25]);
  CHECK(best.certificate.worst_cond == *std::min_element(conds.begin(), conds.end()));

  SearchOptions det;
  det.objective = IdentifierObjective::kMaximinDet;
  double prev = -1.0;
  for (int trials : {1, 3, 10, 30}) {
    det.trials = trials;
    const auto r = search_identifier(3, det);
    CHECK(r.score >= prev);
    prev = r.score;
  }
  CHECK_THROWS_AS(search_identifier(3, SearchOptions{0}), DomainError);
}

TEST_CASE("finite_apply") {
  const auto c = random_unit_vector(3, 0);
  CHECK(norm2(finite_apply(CellPattern(), {}, c)) == 0.0);
  const CVector one{1.0};
  CHECK(finite_apply(CellPattern({{0, 0}}), one, c) == c);
  const CellPattern p({{0, 1}, {2, 2}, {1, 0}});
  const auto v = random_vector(3, 77);
  const auto y = finite_apply(p, v, c);
  const auto G = gabor_matrix(c);
  for (int j = 0; j < 3; ++j) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < 3; ++i) acc += G(j, p.cells[i].l * 3 + p.cells[i].k) * v[i];
    CHECK(std::abs(y[static_cast<std::size_t>(j)] - acc) < 1e-15);
  }
  CHECK_THROWS_AS(finite_apply(p, one, c), SizeMismatchError);
  CHECK_THROWS_AS(CellPattern({{0, 1}, {0, 1}}), DomainError);
}

TEST_CASE("finite identification round trips for prime L") {
  for (int L : {2, 3, 5, 7}) {
    const auto c = random_unit_vector(L, 0);
    RandomStream rs(123, static_cast<std::uint64_t>(L));
    for (int trial = 0; trial < 100; ++trial) {
      const int size = 1 + static_cast<int>(rs.below(static_cast<std::uint64_t>(L)));
      std::vector<int> idx(static_cast<std::size_t>(L * L));
      std::iota(idx.begin(), idx.end(), 0);
      for (int i = 0; i < size; ++i) std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(i) + rs.below(static_cast<std::uint64_t>(L * L - i))]);
      std::vector<Cell> cells;
      for (int i = 0; i < size; ++i) cells.push_back({idx[static_cast<std::size_t>(i)] % L, idx[static_cast<std::size_t>(i)] / L});
      const CellPattern p(cells);
      CVector v(static_cast<std::size_t>(size));
      for (auto& x : v) x = rs.complex_normal();
      const auto sol = finite_identify(finite_apply(p, v, c), p, c);
      CHECK(opws::testing::rel_err(sol.values, v) <= 1e-10);
      CHECK(sol.residual <= 1e-12);
      CHECK(sol.condition >= 1.0);
    }
  }
}

TEST_CASE("finite identification errors") {
  const auto c = random_unit_vector(2, 0);
  const CVector y(2, 1.0);
  CHECK_THROWS_AS(finite_identify(y, CellPattern({{0, 0}, {1, 0}, {0, 1}}), c), DomainError);
  const CVector ones{1.0, 1.0};
  CHECK_THROWS_AS(finite_identify(y, CellPattern({{0, 0}, {1, 0}}), ones), SingularSystemError);
  try {
    finite_identify(y, CellPattern({{0, 0}, {1, 0}}), ones);
  } catch (const SingularSystemError& e) {
    CHECK(e.condition() > 1e6);
  }
}

TEST_CASE("condition number helpers") {
  CMatrix d = CMatrix::Zero(3, 3);
  d(0, 0) = 4.0;
  d(1, 1) = 2.0;
  d(2, 2) = 0.5;
  CHECK(condition_number(d) == doctest::Approx(8.0));
  CHECK(min_singular_value(d) == doctest::Approx(0.5));
  CHECK(std::isinf(condition_number(CMatrix::Ones(2, 3))));
}

}  // TEST_SUITE
