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

#include "doctest.h"
#include "opws/common.hpp"
#include "opws/rng.hpp"
#include "opws/support.hpp"

using namespace opws;

TEST_SUITE("support") {

TEST_CASE("rational arithmetic reduces and orders exactly") {
  const Rational a(2, 4), b(-3, 6);
  CHECK(a == Rational(1, 2));
  CHECK(b == Rational(-1, 2));
  CHECK(a + b == Rational(0));
  CHECK(a * b == Rational(-1, 4));
  CHECK(a / b == Rational(-1));
  CHECK(b < a);
  CHECK(Rational(7, 3).floor() == 2);
  CHECK(Rational(7, 3).ceil() == 3);
  CHECK(Rational(-7, 3).floor() == -3);
  CHECK(Rational(-7, 3).ceil() == -2);
  CHECK(Rational(6, 3).ceil() == 2);
  CHECK_THROWS_AS(Rational(1, 0), DomainError);
  CHECK_THROWS_AS(a / Rational(0), DomainError);
}

TEST_CASE("rational parsing and conversion") {
  CHECK(Rational::parse("3/8") == Rational(3, 8));
  CHECK(Rational::parse("-0.375") == Rational(-3, 8));
  CHECK(Rational::parse("5") == Rational(5));
  CHECK(Rational::parse("1e-3") == Rational(1, 1000));
  CHECK(Rational::from_double(0.45) == Rational(9, 20));
  CHECK(Rational::from_double(1.0 / 3.0) == Rational(1, 3));
  CHECK(Rational(22, 7).to_string() == "22/7");
  CHECK(Rational(4).to_string() == "4");
  CHECK_THROWS_AS(Rational::from_double(std::nan("")), DomainError);
}

TEST_CASE("rational overflow is reported") {
  const Rational big(std::int64_t{1} << 62, 3);
  CHECK_THROWS_AS(big * big, DomainError);
}

TEST_CASE("rectangle union area removes overlaps") {
  auto s = SupportSet::rectangles({{Rational(0), Rational(1), Rational(0), Rational(1)},
                                   {Rational(1, 2), Rational(3, 2), Rational(1, 2), Rational(3, 2)}});
  CHECK(s.area() == doctest::Approx(1.75).epsilon(1e-15));
  CHECK(s.contains(0.25, 0.25));
  CHECK(s.contains(1.25, 1.25));
  CHECK_FALSE(s.contains(1.25, 0.25));
  CHECK_FALSE(s.contains(1.0, 0.0));  // half-open
  CHECK(s.bounds()->t1 == Rational(3, 2));
  CHECK_THROWS_AS(SupportSet::rectangles({{Rational(0), Rational(0), Rational(0), Rational(1)}}),
                  DomainError);
}

TEST_CASE("cell coverage tests split along interior edges") {
  // Two rectangles that jointly cover [0,1)^2 but neither alone does.
  auto s = SupportSet::rectangles({{Rational(0), Rational(1, 3), Rational(0), Rational(1)},
                                   {Rational(1, 3), Rational(1), Rational(0), Rational(1)}});
  const Rect cell{Rational(0), Rational(1), Rational(0), Rational(1)};
  CHECK(s.covers_cell(cell));
  const Rect outside{Rational(1), Rational(2), Rational(0), Rational(1)};
  CHECK_FALSE(s.meets_cell(outside));  // touching edge only
  const Rect straddle{Rational(1, 2), Rational(3, 2), Rational(0), Rational(1)};
  CHECK(s.meets_cell(straddle));
  CHECK_FALSE(s.covers_cell(straddle));
}

TEST_CASE("raster and rectangle representations agree on random cells") {
  // Raster of [1/4, 3/4) x [0, 1/2) at pixel size 1/8.
  Raster m;
  m.t0 = Rational(0);
  m.dt = Rational(1, 8);
  m.nu0 = Rational(0);
  m.dnu = Rational(1, 8);
  m.nt = 8;
  m.nnu = 8;
  m.bits.assign(64, 0);
  for (int i = 2; i < 6; ++i) {
    for (int j = 0; j < 4; ++j) m.bits[static_cast<std::size_t>(i * 8 + j)] = 1;
  }
  const auto r = SupportSet::raster(m);
  const auto q = SupportSet::rectangles({{Rational(1, 4), Rational(3, 4), Rational(0), Rational(1, 2)}});
  CHECK(r.area() == doctest::Approx(q.area()));
  CHECK(*r.bounds() == *q.bounds());
  RandomStream rs(7, 0);
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = static_cast<std::int64_t>(rs.below(12)) - 2;
    const auto b = a + 1 + static_cast<std::int64_t>(rs.below(6));
    const auto c = static_cast<std::int64_t>(rs.below(12)) - 2;
    const auto d = c + 1 + static_cast<std::int64_t>(rs.below(6));
    const Rect cell{Rational(a, 8), Rational(b, 8), Rational(c, 8), Rational(d, 8)};
    CHECK(r.covers_cell(cell) == q.covers_cell(cell));
    CHECK(r.meets_cell(cell) == q.meets_cell(cell));
  }
}

TEST_CASE("enlargement and transformation") {
  const auto s = SupportSet::rectangles({{Rational(0), Rational(1), Rational(0), Rational(1, 2)}});
  const auto e = s.enlarged(Rational(1, 4));
  CHECK(*e.bounds() == Rect{Rational(-1, 8), Rational(9, 8), Rational(-1, 8), Rational(5, 8)});
  const auto t = s.transformed(Rational(2), Rational(1), Rational(-1));
  CHECK(*t.bounds() == Rect{Rational(-1, 2), Rational(0), Rational(2), Rational(3)});
  CHECK(t.area() == doctest::Approx(s.area()));
  CHECK_THROWS_AS(s.transformed(Rational(0), Rational(0), Rational(0)), DomainError);
}

TEST_CASE("raster enlargement grows by whole pixels") {
  Raster m;
  m.t0 = Rational(0);
  m.dt = Rational(1, 4);
  m.nu0 = Rational(0);
  m.dnu = Rational(1, 4);
  m.nt = 2;
  m.nnu = 2;
  m.bits = {1, 0, 0, 0};
  const auto e = SupportSet::raster(m).enlarged(Rational(1, 4));
  // Half-width 1/8 rounds up to one pixel on each side.
  CHECK(e.area() == doctest::Approx(9.0 / 16.0));
  CHECK(e.contains(-0.2, -0.2));
}

}  // TEST_SUITE
