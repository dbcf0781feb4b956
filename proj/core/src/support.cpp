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

#include "opws/support.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <set>

#include "opws/common.hpp"

namespace opws {

namespace {

__extension__ typedef __int128 i128;

std::int64_t narrow(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw DomainError("rational arithmetic overflow");
  }
  return static_cast<std::int64_t>(v);
}

Rational make(i128 num, i128 den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 a = num < 0 ? -num : num;
  i128 b = den;
  while (b != 0) {
    const i128 r = a % b;
    a = b;
    b = r;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  return Rational(narrow(num), narrow(den));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = g > 1 ? num / g : num;
  den_ = g > 1 ? den / g : den;
}

Rational Rational::from_double(double x, std::int64_t max_den) {
  if (!std::isfinite(x)) throw DomainError("non-finite coordinate");
  // Continued-fraction convergents.
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(r);
    if (std::abs(a) > 9.0e15) break;
    const auto ai = static_cast<std::int64_t>(a);
    const i128 p2 = static_cast<i128>(ai) * p1 + p0;
    const i128 q2 = static_cast<i128>(ai) * q1 + q0;
    if (q2 > max_den || p2 > std::numeric_limits<std::int64_t>::max() ||
        p2 < std::numeric_limits<std::int64_t>::min()) {
      break;
    }
    p0 = p1;
    q0 = q1;
    p1 = static_cast<std::int64_t>(p2);
    q1 = static_cast<std::int64_t>(q2);
    const double frac = r - a;
    if (std::abs(static_cast<double>(p1) / static_cast<double>(q1) - x) <=
        1e-15 * std::max(1.0, std::abs(x))) {
      break;
    }
    if (frac == 0.0) break;
    r = 1.0 / frac;
  }
  if (q1 == 0) throw DomainError("cannot represent coordinate as a rational");
  const Rational out(p1, q1);
  if (std::abs(out.to_double() - x) > 1e-12 * std::max(1.0, std::abs(x))) {
    throw DomainError("coordinate " + std::to_string(x) + " has no small-denominator rational form");
  }
  return out;
}

Rational Rational::parse(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
  }
  const auto dot = text.find('.');
  const bool plain = text.find_first_of("eE") == std::string::npos;
  if (dot != std::string::npos && plain) {
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const auto decimals = text.size() - dot - 1;
    if (decimals > 17) return from_double(std::stod(text));
    std::int64_t den = 1;
    for (std::size_t i = 0; i < decimals; ++i) den *= 10;
    if (digits.empty() || digits == "-" || digits == "+") digits += "0";
    return Rational(std::stoll(digits), den);
  }
  if (plain) return Rational(std::stoll(text));
  return from_double(std::stod(text));
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::int64_t Rational::floor() const {
  std::int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ < 0) --q;
  return q;
}

std::int64_t Rational::ceil() const {
  std::int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ > 0) ++q;
  return q;
}

Rational operator+(const Rational& a, const Rational& b) {
  return make(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
              static_cast<i128>(a.den_) * b.den_);
}
Rational operator-(const Rational& a, const Rational& b) {
  return make(static_cast<i128>(a.num_) * b.den_ - static_cast<i128>(b.num_) * a.den_,
              static_cast<i128>(a.den_) * b.den_);
}
Rational operator*(const Rational& a, const Rational& b) {
  return make(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
}
Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw DomainError("rational division by zero");
  return make(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const i128 l = static_cast<i128>(a.num_) * b.den_;
  const i128 r = static_cast<i128>(b.num_) * a.den_;
  if (l < r) return std::strong_ordering::less;
  if (l > r) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

bool Rect::contains(double t, double nu) const {
  return t0.to_double() <= t && t < t1.to_double() && nu0.to_double() <= nu &&
         nu < nu1.to_double();
}

void Raster::index() {
  if (bits.size() != static_cast<std::size_t>(nt) * static_cast<std::size_t>(nnu)) {
    throw SizeMismatchError("raster bit count does not match its dimensions");
  }
  const auto w = static_cast<std::size_t>(nnu) + 1;
  prefix_.assign((static_cast<std::size_t>(nt) + 1) * w, 0);
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < nnu; ++j) {
      prefix_[(i + 1) * w + (j + 1)] = prefix_[i * w + (j + 1)] + prefix_[(i + 1) * w + j] -
                                       prefix_[i * w + j] + (at(i, j) ? 1 : 0);
    }
  }
}

std::int64_t Raster::count(long long i0, long long i1, long long j0, long long j1) const {
  i0 = std::clamp<long long>(i0, 0, nt);
  i1 = std::clamp<long long>(i1, 0, nt);
  j0 = std::clamp<long long>(j0, 0, nnu);
  j1 = std::clamp<long long>(j1, 0, nnu);
  if (i1 <= i0 || j1 <= j0) return 0;
  const auto w = static_cast<std::size_t>(nnu) + 1;
  return prefix_[i1 * w + j1] - prefix_[i0 * w + j1] - prefix_[i1 * w + j0] + prefix_[i0 * w + j0];
}

SupportSet SupportSet::rectangles(std::vector<Rect> rects) {
  for (const auto& r : rects) {
    if (!(r.t0 < r.t1) || !(r.nu0 < r.nu1)) {
      throw DomainError("support rectangles must have positive area");
    }
  }
  SupportSet s;
  s.rep_ = std::move(rects);
  return s;
}

SupportSet SupportSet::raster(Raster mask) {
  if (mask.nt < 0 || mask.nnu < 0 || !(Rational(0) < mask.dt) || !(Rational(0) < mask.dnu)) {
    throw DomainError("raster needs positive steps");
  }
  mask.index();
  SupportSet s;
  s.rep_ = std::move(mask);
  return s;
}

bool SupportSet::empty() const {
  if (is_raster()) return mask().count(0, mask().nt, 0, mask().nnu) == 0;
  return rects().empty();
}

bool SupportSet::contains(double t, double nu) const {
  if (is_raster()) {
    const auto& m = mask();
    const double fi = std::floor((t - m.t0.to_double()) / m.dt.to_double());
    const double fj = std::floor((nu - m.nu0.to_double()) / m.dnu.to_double());
    if (fi < 0 || fj < 0 || fi >= m.nt || fj >= m.nnu) return false;
    return m.at(static_cast<int>(fi), static_cast<int>(fj));
  }
  return std::any_of(rects().begin(), rects().end(),
                     [&](const Rect& r) { return r.contains(t, nu); });
}

std::optional<Rect> SupportSet::bounds() const {
  if (empty()) return std::nullopt;
  if (is_raster()) {
    const auto& m = mask();
    int i0 = m.nt, i1 = -1, j0 = m.nnu, j1 = -1;
    for (int i = 0; i < m.nt; ++i) {
      for (int j = 0; j < m.nnu; ++j) {
        if (!m.at(i, j)) continue;
        i0 = std::min(i0, i);
        i1 = std::max(i1, i);
        j0 = std::min(j0, j);
        j1 = std::max(j1, j);
      }
    }
    return Rect{m.t0 + m.dt * Rational(i0), m.t0 + m.dt * Rational(i1 + 1),
                m.nu0 + m.dnu * Rational(j0), m.nu0 + m.dnu * Rational(j1 + 1)};
  }
  Rect b = rects().front();
  for (const auto& r : rects()) {
    b.t0 = min(b.t0, r.t0);
    b.t1 = max(b.t1, r.t1);
    b.nu0 = min(b.nu0, r.nu0);
    b.nu1 = max(b.nu1, r.nu1);
  }
  return b;
}

double SupportSet::area() const {
  if (is_raster()) {
    const auto& m = mask();
    return static_cast<double>(m.count(0, m.nt, 0, m.nnu)) * (m.dt * m.dnu).to_double();
  }
  std::set<Rational> ts, ns;
  for (const auto& r : rects()) {
    ts.insert(r.t0);
    ts.insert(r.t1);
    ns.insert(r.nu0);
    ns.insert(r.nu1);
  }
  const std::vector<Rational> tv(ts.begin(), ts.end()), nv(ns.begin(), ns.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < tv.size(); ++i) {
    for (std::size_t j = 0; j + 1 < nv.size(); ++j) {
      const Rect piece{tv[i], tv[i + 1], nv[j], nv[j + 1]};
      const bool covered = std::any_of(rects().begin(), rects().end(),
                                       [&](const Rect& r) { return piece.inside(r); });
      if (covered) total += piece.area().to_double();
    }
  }
  return total;
}

namespace {

// Pixel index range [first, last) of a raster axis overlapping [a, b).
std::pair<long long, long long> pixel_range(const Rational& origin, const Rational& step,
                                            const Rational& a, const Rational& b) {
  const long long first = ((a - origin) / step).floor();
  const long long last = ((b - origin) / step).ceil();
  return {first, last};
}

}  // namespace

bool SupportSet::covers_cell(const Rect& cell) const {
  if (is_raster()) {
    const auto& m = mask();
    const auto [i0, i1] = pixel_range(m.t0, m.dt, cell.t0, cell.t1);
    const auto [j0, j1] = pixel_range(m.nu0, m.dnu, cell.nu0, cell.nu1);
    if (i0 < 0 || j0 < 0 || i1 > m.nt || j1 > m.nnu) return false;
    return m.count(i0, i1, j0, j1) == (i1 - i0) * (j1 - j0);
  }
  // Split the cell along every rectangle edge that crosses it; each piece is
  // then either inside some rectangle or disjoint from all of them.
  std::vector<Rational> ts{cell.t0, cell.t1}, ns{cell.nu0, cell.nu1};
  for (const auto& r : rects()) {
    if (!r.intersects(cell)) continue;
    for (const auto& v : {r.t0, r.t1}) {
      if (cell.t0 < v && v < cell.t1) ts.push_back(v);
    }
    for (const auto& v : {r.nu0, r.nu1}) {
      if (cell.nu0 < v && v < cell.nu1) ns.push_back(v);
    }
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    for (std::size_t j = 0; j + 1 < ns.size(); ++j) {
      const Rect piece{ts[i], ts[i + 1], ns[j], ns[j + 1]};
      const bool covered = std::any_of(rects().begin(), rects().end(),
                                       [&](const Rect& r) { return piece.inside(r); });
      if (!covered) return false;
    }
  }
  return true;
}

bool SupportSet::meets_cell(const Rect& cell) const {
  if (is_raster()) {
    const auto& m = mask();
    const auto [i0, i1] = pixel_range(m.t0, m.dt, cell.t0, cell.t1);
    const auto [j0, j1] = pixel_range(m.nu0, m.dnu, cell.nu0, cell.nu1);
    return m.count(i0, i1, j0, j1) > 0;
  }
  return std::any_of(rects().begin(), rects().end(),
                     [&](const Rect& r) { return r.intersects(cell); });
}

SupportSet SupportSet::enlarged(const Rational& eps) const {
  if (eps < Rational(0)) throw DomainError("negative enlargement");
  const Rational half = eps / Rational(2);
  if (!is_raster()) {
    std::vector<Rect> out;
    out.reserve(rects().size());
    for (const auto& r : rects()) out.push_back({r.t0 - half, r.t1 + half, r.nu0 - half, r.nu1 + half});
    return rectangles(std::move(out));
  }
  const auto& m = mask();
  const long long gi = (half / m.dt).ceil();
  const long long gj = (half / m.dnu).ceil();
  Raster g;
  g.t0 = m.t0 - m.dt * Rational(gi);
  g.dt = m.dt;
  g.nu0 = m.nu0 - m.dnu * Rational(gj);
  g.dnu = m.dnu;
  g.nt = m.nt + 2 * static_cast<int>(gi);
  g.nnu = m.nnu + 2 * static_cast<int>(gj);
  g.bits.assign(static_cast<std::size_t>(g.nt) * g.nnu, 0);
  for (int i = 0; i < g.nt; ++i) {
    for (int j = 0; j < g.nnu; ++j) {
      // Pixel (i, j) of g is set if any source pixel within the window is.
      const long long si = i - gi, sj = j - gj;
      if (m.count(si - gi, si + gi + 1, sj - gj, sj + gj + 1) > 0) {
        g.bits[static_cast<std::size_t>(i) * g.nnu + j] = 1;
      }
    }
  }
  return raster(std::move(g));
}

SupportSet SupportSet::transformed(const Rational& a, const Rational& t_shift,
                                   const Rational& nu_shift) const {
  if (!(Rational(0) < a)) throw DomainError("dilation factor must be positive");
  if (!is_raster()) {
    std::vector<Rect> out;
    out.reserve(rects().size());
    for (const auto& r : rects()) {
      out.push_back({(r.t0 - t_shift) / a, (r.t1 - t_shift) / a, a * (r.nu0 - nu_shift),
                     a * (r.nu1 - nu_shift)});
    }
    return rectangles(std::move(out));
  }
  Raster g = mask();
  g.t0 = (g.t0 - t_shift) / a;
  g.dt = g.dt / a;
  g.nu0 = a * (g.nu0 - nu_shift);
  g.dnu = a * g.dnu;
  return raster(std::move(g));
}

}  // namespace opws
