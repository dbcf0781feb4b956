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

// Exact rationals and spreading-support sets.
//
// Rectangles are half-open, [t0, t1) x [nu0, nu1), with rational corners so
// that membership tests against the m/K, nK/L cell grids are exact. Raster
// masks use rational origins and steps for the same reason.

#ifndef OPWS_SUPPORT_HPP_
#define OPWS_SUPPORT_HPP_

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace opws {

class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  /// Best rational approximation with denominator <= max_den; throws
  /// DomainError if it misses x by more than 1e-12 relative.
  static Rational from_double(double x, std::int64_t max_den = 1'000'000'000);
  /// Parses "p/q", an integer, or a decimal literal ("0.375") exactly.
  static Rational parse(const std::string& text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const;

  std::int64_t floor() const;
  std::int64_t ceil() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const { return Rational(-num_, den_); }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

/// Half-open rectangle [t0, t1) x [nu0, nu1) in the (time shift, frequency
/// shift) plane.
struct Rect {
  Rational t0, t1, nu0, nu1;

  Rational area() const { return (t1 - t0) * (nu1 - nu0); }
  bool contains(double t, double nu) const;
  bool intersects(const Rect& o) const {
    return t0 < o.t1 && o.t0 < t1 && nu0 < o.nu1 && o.nu0 < nu1;
  }
  bool inside(const Rect& o) const {
    return o.t0 <= t0 && t1 <= o.t1 && o.nu0 <= nu0 && nu1 <= o.nu1;
  }
  friend bool operator==(const Rect&, const Rect&) = default;
};

/// Boolean raster; pixel (i, j) covers
/// [t0 + i*dt, t0 + (i+1)*dt) x [nu0 + j*dnu, nu0 + (j+1)*dnu).
struct Raster {
  Rational t0, dt, nu0, dnu;
  int nt = 0;
  int nnu = 0;
  std::vector<std::uint8_t> bits;  // row-major in t: bits[i * nnu + j]

  bool at(int i, int j) const { return bits[static_cast<std::size_t>(i) * nnu + j] != 0; }
  /// Set pixels in [i0, i1) x [j0, j1), clipped to the raster.
  std::int64_t count(long long i0, long long i1, long long j0, long long j1) const;
  /// Rebuilds the summed-area table; SupportSet::raster() calls this.
  void index();

 private:
  std::vector<std::int64_t> prefix_;  // (nt + 1) x (nnu + 1)
};

class SupportSet {
 public:
  SupportSet() = default;  // empty rectangle union
  static SupportSet rectangles(std::vector<Rect> rects);
  static SupportSet raster(Raster mask);

  bool is_raster() const { return std::holds_alternative<Raster>(rep_); }
  const std::vector<Rect>& rects() const { return std::get<std::vector<Rect>>(rep_); }
  const Raster& mask() const { return std::get<Raster>(rep_); }

  bool empty() const;
  bool contains(double t, double nu) const;

  /// Bounding box; nullopt for the empty set.
  std::optional<Rect> bounds() const;
  /// Lebesgue measure (exact for rectangle unions with overlaps removed).
  double area() const;

  /// Exact tests against a half-open cell.
  bool covers_cell(const Rect& cell) const;
  bool meets_cell(const Rect& cell) const;
  /// Exact test that a half-open box lies inside the set.
  bool covers_box(const Rect& box) const { return covers_cell(box); }

  /// Minkowski sum with [-eps/2, eps/2)^2. Rasters grow by whole pixels
  /// (conservatively).
  SupportSet enlarged(const Rational& eps) const;

  /// Image under (t, nu) -> ((t - t_shift) / a, a * (nu - nu_shift)).
  SupportSet transformed(const Rational& a, const Rational& t_shift,
                         const Rational& nu_shift) const;

 private:
  std::variant<std::vector<Rect>, Raster> rep_;
};

}  // namespace opws

#endif  // OPWS_SUPPORT_HPP_
