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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "opws/geometry.hpp"
#include "opws/rng.hpp"

using namespace opws;

namespace {

Rect R(Rational t0, Rational t1, Rational n0, Rational n1) { return {t0, t1, n0, n1}; }

// Triangle {0 <= nu < t < 1} as a raster of pixel centers.
SupportSet triangle(int n) {
  Raster m;
  m.t0 = Rational(0);
  m.dt = Rational(1, n);
  m.nu0 = Rational(0);
  m.dnu = Rational(1, n);
  m.nt = n;
  m.nnu = n;
  m.bits.assign(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) m.bits[static_cast<std::size_t>(i) * n + j] = 1;
  }
  return SupportSet::raster(std::move(m));
}

SupportSet random_union(RandomStream& rs, int count) {
  std::vector<Rect> rects;
  for (int i = 0; i < count; ++i) {
    const auto t0 = static_cast<std::int64_t>(rs.below(16));
    const auto n0 = static_cast<std::int64_t>(rs.below(16));
    rects.push_back(R(Rational(t0, 16), Rational(t0 + 1 + static_cast<std::int64_t>(rs.below(8)), 16),
                      Rational(n0, 8), Rational(n0 + 1 + static_cast<std::int64_t>(rs.below(8)), 8)));
  }
  return SupportSet::rectangles(rects);
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("grid cells") {
  CHECK(grid_cell(2, 5, 1, 3) == R(Rational(1, 2), Rational(1), Rational(6, 5), Rational(8, 5)));
  CHECK(grid_cell(3, 3, 0, 0).area() == Rational(1, 3));
  CHECK_THROWS_AS(grid_cell(0, 3, 0, 0), DomainError);
}

TEST_CASE("content of a grid-aligned rectangle is exact") {
  const auto M = SupportSet::rectangles({R(Rational(0), Rational(1, 2), Rational(0), Rational(1))});
  const auto in = content(M, ContentSide::kInner);
  const auto out = content(M, ContentSide::kOuter);
  CHECK(in.value == 0.5);
  CHECK(out.value == 0.5);
  CHECK(in.bestK == 2);
  CHECK(in.bestL == 2);
  CHECK(out.bestK == 2);
  CHECK(out.bestL == 2);
}

TEST_CASE("content of the empty set is zero") {
  CHECK(content(SupportSet(), ContentSide::kInner).value == 0.0);
  CHECK(content(SupportSet(), ContentSide::kOuter).value == 0.0);
}

TEST_CASE("triangle contents bracket the area and tighten with the budget") {
  const auto M = triangle(256);
  double prev_in = 0.0, prev_out = 2.0;
  for (int budget : {8, 16, 32, 64}) {
    ContentOptions o;
    o.Kmax = o.Lmax = budget;
    const double in = content(M, ContentSide::kInner, o).value;
    const double out = content(M, ContentSide::kOuter, o).value;
    CHECK(in <= M.area() + 1e-12);
    CHECK(out >= M.area() - 1e-12);
    CHECK(in >= prev_in);
    CHECK(out <= prev_out);
    prev_in = in;
    prev_out = out;
  }
}

TEST_CASE("inner content never exceeds outer content, and both are monotone") {
  RandomStream rs(2024, 0);
  ContentOptions o;
  o.Kmax = o.Lmax = 16;
  for (int trial = 0; trial < 30; ++trial) {
    const auto M = random_union(rs, 1 + static_cast<int>(rs.below(4)));
    auto rects = M.rects();
    const auto extra = random_union(rs, 1);
    rects.push_back(extra.rects()[0]);
    const auto Mbig = SupportSet::rectangles(rects);
    const double in = content(M, ContentSide::kInner, o).value;
    const double out = content(M, ContentSide::kOuter, o).value;
    CHECK(in <= out);
    CHECK(in <= M.area() + 1e-12);
    CHECK(out >= M.area() - 1e-12);
    CHECK(in <= content(Mbig, ContentSide::kInner, o).value);
    CHECK(out <= content(Mbig, ContentSide::kOuter, o).value);
  }
}

TEST_CASE("restricting L to primes changes triangle contents by under 2 percent") {
  const auto M = triangle(1024);
  ContentOptions all;
  ContentOptions primes;
  primes.Lset = primes_up_to(64);
  for (auto side : {ContentSide::kInner, ContentSide::kOuter}) {
    const double a = content(M, side, all).value;
    const double p = content(M, side, primes).value;
    INFO("all L: " << a << "  prime L: " << p);
    CHECK(std::abs(p - a) <= 0.02 * a);
  }
}

TEST_CASE("rectify: area-3/4 rectangle") {
  const auto M = SupportSet::rectangles({R(Rational(0), Rational(1, 2), Rational(0), Rational(3, 2))});
  const auto cover = rectify(M, primes_up_to(23));
  CHECK(cover.K == 2);
  CHECK(cover.L == 5);
  REQUIRE(cover.cells.size() == 4);
  const std::vector<std::pair<int, int>> expect{{0, 0}, {0, 1}, {0, 2}, {0, 3}};
  CHECK(cover.cells == expect);
  CHECK(cover.area() == doctest::Approx(0.8));
  CHECK(cover.as_support().covers_box(M.rects()[0]));
}

TEST_CASE("rectify: a single grid cell") {
  const auto M = SupportSet::rectangles({grid_cell(2, 3, 0, 0)});
  const auto cover = rectify(M, {3});
  CHECK(cover.K == 2);
  CHECK(cover.L == 3);
  CHECK(cover.cells.size() == 1);
  CHECK(cover.eps == Rational(0));
}

TEST_CASE("rectify prefers the largest feasible epsilon") {
  const auto M = SupportSet::rectangles({R(Rational(1, 8), Rational(3, 8), Rational(1, 8), Rational(3, 8))});
  const auto cover = rectify(M, primes_up_to(23));
  CHECK(cover.eps == Rational(1, 8));
  CHECK(cover.L == 2);
  CHECK(cover.K == 1);
  const auto Me = M.enlarged(cover.eps);
  CHECK(cover.as_support().covers_box(*Me.bounds()));
  CHECK(cover.cells.size() < static_cast<std::size_t>(cover.L));
}

TEST_CASE("rectify: infeasible when the area exceeds one") {
  const auto M = SupportSet::rectangles({R(Rational(0), Rational(1), Rational(0), Rational(6, 5))});
  CHECK_THROWS_AS(rectify(M, primes_up_to(23)), InfeasibleError);
}

TEST_CASE("rectify output invariants on random supports") {
  RandomStream rs(99, 0);
  int solved = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const auto M = random_union(rs, 1 + static_cast<int>(rs.below(3)));
    try {
      const auto cover = rectify(M, primes_up_to(23));
      ++solved;
      CHECK(cover.area() < 1.0);
      CHECK(cover.L >= cover.K);
      const auto U = cover.as_support();
      for (const auto& r : M.rects()) CHECK(U.covers_box(r));
      const auto Me = M.enlarged(cover.eps);
      for (const auto& r : Me.rects()) CHECK(U.covers_box(r));
    } catch (const InfeasibleError&) {
      CHECK(M.area() > 0.0);
    }
  }
  CHECK(solved > 0);
}

TEST_CASE("normalize_support examples") {
  const auto a = normalize_support(SupportSet::rectangles({R(Rational(0), Rational(2), Rational(0), Rational(1, 4))}));
  CHECK(a.a == Rational(2));
  CHECK(*a.normalized.bounds() == R(Rational(0), Rational(1), Rational(0), Rational(1, 2)));
  CHECK(a.K == 1);

  const auto M = SupportSet::rectangles({R(Rational(1, 4), Rational(3, 4), Rational(0), Rational(5, 2))});
  const auto b = normalize_support(M);
  CHECK(b.a == Rational(1));
  CHECK(b.t0 == Rational(0));
  CHECK(b.nu0 == Rational(0));
  CHECK(b.K == 3);
  CHECK(*b.normalized.bounds() == *M.bounds());

  const auto c = normalize_support(SupportSet::rectangles({R(Rational(3), Rational(4), Rational(-1), Rational(0))}));
  CHECK(c.a == Rational(1));
  CHECK(c.t0 == Rational(3));
  CHECK(c.nu0 == Rational(-1));
  CHECK(*c.normalized.bounds() == R(Rational(0), Rational(1), Rational(0), Rational(1)));

  CHECK_THROWS_AS(normalize_support(SupportSet()), DomainError);
}

TEST_CASE("normalize_support preserves area rectangle by rectangle") {
  RandomStream rs(5, 0);
  for (int trial = 0; trial < 20; ++trial) {
    auto M = random_union(rs, 3);
    M = M.transformed(Rational(1, 3), Rational(-2), Rational(1, 2));
    const auto nz = normalize_support(M);
    const auto box = *nz.normalized.bounds();
    CHECK(Rational(0) <= box.t0);
    CHECK(box.t1 <= Rational(1));
    CHECK(Rational(0) <= box.nu0);
    CHECK(box.nu1 <= Rational(nz.K));
    for (std::size_t i = 0; i < M.rects().size(); ++i) {
      CHECK(M.rects()[i].area() == nz.normalized.rects()[i].area());
    }
  }
}

TEST_CASE("transport_identifier dilates, translates and modulates the train") {
  const DeltaTrain g(0.5, 0.1, {1.0, cplx(0, 2), -1.0}, 0.3);
  SupportNormalization nz;
  nz.a = Rational(2);
  nz.t0 = Rational(3, 2);
  nz.nu0 = Rational(-1, 4);
  const auto h = transport_identifier(g, nz);
  for (long long n = -5; n <= 5; ++n) {
    const double x = 2.0 * g.position(n) + 1.5;
    CHECK(h.position(n) == doctest::Approx(x));
    // e^{2 pi i nu0 x} times the dilated train's weight at the same delta.
    const cplx expect = cis2pi(-0.25 * x) * g.weight(n);
    CHECK(std::abs(h.weight(n) - expect) < 1e-13);
  }
}

}  // TEST_SUITE
