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

#include "opws/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <unsupported/Eigen/FFT>

namespace opws {

CVector dft(std::span<const cplx> v) {
  if (v.empty()) throw DomainError("dft of an empty vector");
  if (v.size() == 1) return CVector(v.begin(), v.end());  // kissfft crashes on n = 1
  Eigen::FFT<double> fft;
  const CVector in(v.begin(), v.end());
  CVector out;
  fft.fwd(out, in);
  const double scale = 1.0 / std::sqrt(static_cast<double>(v.size()));
  for (auto& x : out) x *= scale;
  return out;
}

CVector idft(std::span<const cplx> v) {
  if (v.empty()) throw DomainError("idft of an empty vector");
  if (v.size() == 1) return CVector(v.begin(), v.end());
  Eigen::FFT<double> fft;
  const CVector in(v.begin(), v.end());
  CVector out;
  fft.inv(out, in);  // includes 1/N
  const double scale = std::sqrt(static_cast<double>(v.size()));
  for (auto& x : out) x *= scale;
  return out;
}

namespace {

double centered_origin(std::size_t n, double step) {
  return -static_cast<double>(n / 2) * step;
}

}  // namespace

GriddedArray symplectic_dft2(const GriddedArray& in) {
  const auto M = in.values.rows();
  const auto N = in.values.cols();
  GriddedArray out;
  if (M == 0 || N == 0) {
    out.values = CMatrix(N, M);
    return out;
  }
  const Grid2D& g = in.grid;
  const double dt = 1.0 / (static_cast<double>(N) * g.step1);
  const double dnu = 1.0 / (static_cast<double>(M) * g.step0);
  out.grid = {centered_origin(static_cast<std::size_t>(N), dt), dt,
              centered_origin(static_cast<std::size_t>(M), dnu), dnu};
  // G[p, q] = step0 step1 sum_{a, b} F[a, b] e^{-2 pi i nu_q x_a} e^{2 pi i xi_b t_p}
  CMatrix pt(N, N), pnu(M, M);
  for (Eigen::Index p = 0; p < N; ++p) {
    const double t = out.grid.origin0 + static_cast<double>(p) * dt;
    for (Eigen::Index b = 0; b < N; ++b) {
      pt(p, b) = cis2pi((g.origin1 + static_cast<double>(b) * g.step1) * t);
    }
  }
  for (Eigen::Index a = 0; a < M; ++a) {
    const double x = g.origin0 + static_cast<double>(a) * g.step0;
    for (Eigen::Index q = 0; q < M; ++q) {
      pnu(a, q) = cis2pi(-(out.grid.origin1 + static_cast<double>(q) * dnu) * x);
    }
  }
  out.values = (pt * in.values.transpose() * pnu) * (g.step0 * g.step1);
  return out;
}

GriddedArray kn_symbol_grid(const GroundTruthOperator& op, const Grid2D& grid, std::size_t nx,
                            std::size_t nxi) {
  GriddedArray out{CMatrix(static_cast<Eigen::Index>(nx), static_cast<Eigen::Index>(nxi)), grid};
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < nxi; ++j) {
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          kn_symbol(op, grid.origin0 + static_cast<double>(i) * grid.step0,
                    grid.origin1 + static_cast<double>(j) * grid.step1);
    }
  }
  return out;
}

GriddedArray zak(const SampledSignal& f, double T, std::size_t nt, std::size_t nnu) {
  const double ratio = T / f.dt;
  const double period = std::round(ratio);
  if (!(T > 0.0) || period < 1 || std::abs(ratio - period) > 1e-9 * ratio) {
    throw DomainError("Zak period must be an integer multiple of the sample step");
  }
  const double off = -f.t0 / f.dt;  // index of time 0
  if (std::abs(off - std::round(off)) > 1e-9 * std::max(1.0, std::abs(off))) {
    throw DomainError("signal grid is not aligned with time 0");
  }
  const auto P = static_cast<long long>(period);
  if (static_cast<long long>(nt) > P) throw DomainError("Zak time grid exceeds one period");
  const auto o = static_cast<long long>(std::round(off));
  const auto size = static_cast<long long>(f.size());
  const double dnu = 1.0 / (static_cast<double>(nnu) * T);

  GriddedArray out{CMatrix::Zero(static_cast<Eigen::Index>(nt), static_cast<Eigen::Index>(nnu)),
                   {0.0, f.dt, 0.0, dnu}};
  for (std::size_t i = 0; i < nt; ++i) {
    // Sample index of t_i - n T is i + o - n P; keep those inside [0, size).
    const long long base = static_cast<long long>(i) + o;
    const long long nlo = (base - (size - 1) + P - 1 >= 0) ? (base - (size - 1) + P - 1) / P
                                                           : -((size - 1 - base) / P);
    const long long nhi = base >= 0 ? base / P : -((-base + P - 1) / P);
    for (long long n = nlo; n <= nhi; ++n) {
      const long long idx = base - n * P;
      if (idx < 0 || idx >= size) continue;
      const cplx v = f.samples[static_cast<std::size_t>(idx)];
      if (v == cplx(0.0)) continue;
      for (std::size_t q = 0; q < nnu; ++q) {
        // lambda nu = n T q / (nnu T) = n q / nnu, reduced to keep the phase exact.
        const long long r = ((n * static_cast<long long>(q)) % static_cast<long long>(nnu) +
                             static_cast<long long>(nnu)) %
                            static_cast<long long>(nnu);
        out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(q)) +=
            v * cis2pi(static_cast<double>(r) / static_cast<double>(nnu));
      }
    }
  }
  return out;
}

double stft_mixed_norm(const SampledSignal& f, double p, double q, double time_step,
                       double freq_step) {
  if (!(p >= 1.0) || !(q >= 1.0)) throw DomainError("mixed-norm exponents must be >= 1");
  if (!(time_step > 0.0) || !(freq_step > 0.0)) throw DomainError("grid steps must be positive");
  if (f.size() == 0) return 0.0;
  const double reach = 6.0;  // phi < 1e-48 beyond this
  const double tau0 = f.t0 - 4.0;
  const auto ntau = static_cast<std::size_t>(std::floor((f.end_time() + 4.0 - tau0) / time_step)) + 1;
  const double nyq = 0.5 / f.dt;
  const auto nw = static_cast<std::size_t>(std::ceil(2.0 * nyq / freq_step));
  const double root = std::pow(2.0, 0.25);

  const bool pinf = std::isinf(p);
  const bool qinf = std::isinf(q);
  double outer = 0.0;
  for (std::size_t k = 0; k < nw; ++k) {
    const double w = -nyq + static_cast<double>(k) * freq_step;
    double inner = 0.0;
    for (std::size_t i = 0; i < ntau; ++i) {
      const double tau = tau0 + static_cast<double>(i) * time_step;
      const auto n0 = static_cast<long long>(std::max(0.0, std::ceil((tau - reach - f.t0) / f.dt)));
      const auto n1 = std::min(static_cast<long long>(f.size()) - 1,
                               static_cast<long long>(std::floor((tau + reach - f.t0) / f.dt)));
      cplx acc = 0.0;
      for (long long n = n0; n <= n1; ++n) {
        const double x = f.time(static_cast<std::size_t>(n));
        const double u = x - tau;
        acc += f.samples[static_cast<std::size_t>(n)] * (root * std::exp(-kPi * u * u)) * cis2pi(-w * x);
      }
      const double mag = std::abs(acc) * f.dt;
      if (pinf) {
        inner = std::max(inner, mag);
      } else {
        inner += std::pow(mag, p) * time_step;
      }
    }
    if (!pinf) inner = std::pow(inner, 1.0 / p);
    if (qinf) {
      outer = std::max(outer, inner);
    } else {
      outer += std::pow(inner, q) * freq_step;
    }
  }
  return qinf ? outer : std::pow(outer, 1.0 / q);
}

Window::Window(Kind kind, double lo, double hi, double transition, Grid1D grid)
    : kind_(kind), lo_(lo), hi_(hi), transition_(kind == Kind::kSharp ? 0.0 : transition) {
  if (!(lo < hi)) throw DomainError("window passband must be nonempty");
  if (kind == Kind::kRaisedCosine && !(transition > 0.0)) {
    throw DomainError("raised-cosine window needs a positive transition width");
  }
  if (!(grid.dt > 0.0) || grid.n == 0) throw DomainError("window grid must be nonempty");
  // Samples are the inverse DFT of spectrum samples on nu_k = k / (n dt).
  const double df = 1.0 / (static_cast<double>(grid.n) * grid.dt);
  const auto n = static_cast<long long>(grid.n);
  std::vector<std::pair<double, double>> bins;
  for (long long k = -(n / 2); k < n - n / 2; ++k) {
    const double nu = static_cast<double>(k) * df;
    const double sv = spectrum(nu);
    if (sv != 0.0) bins.emplace_back(nu, sv);
  }
  CVector values(grid.n, 0.0);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.at(i);
    cplx acc = 0.0;
    for (const auto& [nu, sv] : bins) acc += sv * cis2pi(nu * x);
    values[i] = acc * df;
  }
  signal_ = SampledSignal(grid.t0, grid.dt, std::move(values));
}

double Window::spectrum(double nu) const {
  if (kind_ == Kind::kSharp) return (lo_ <= nu && nu < hi_) ? 1.0 : 0.0;
  if (lo_ <= nu && nu <= hi_) return 1.0;
  const double gap = nu < lo_ ? lo_ - nu : nu - hi_;
  if (gap >= transition_) return 0.0;
  return 0.5 * (1.0 + std::cos(kPi * gap / transition_));
}

cplx Window::value(double x) const {
  const cplx phase = cis2pi(0.5 * (lo_ + hi_) * x);
  if (kind_ == Kind::kSharp) return phase * ((hi_ - lo_) * sinc((hi_ - lo_) * x));
  const double a = 0.5 * (hi_ - lo_);
  const double d = transition_;
  const double b = a + d;
  const double u = 2.0 * d * x;
  const double den = 1.0 - u * u;
  const double ratio = std::abs(den) < 1e-7 ? kPi / 4.0 : std::cos(kPi * d * x) / den;
  return phase * ((a + b) * sinc((a + b) * x) * ratio);
}

double Window::peak() const {
  if (kind_ == Kind::kSharp) return hi_ - lo_;
  return hi_ - lo_ + transition_;
}

double Window::decay_radius(double rel, double cap) const {
  const double target = rel * peak();
  // Envelope: 1 / (pi r) for the sharp window, 1 / (pi r (4 d^2 r^2 - 1))
  // once 2 d r > 1 for the raised cosine.
  auto envelope = [&](double r) {
    if (kind_ == Kind::kSharp) return 1.0 / (kPi * r);
    const double u = 2.0 * transition_ * r;
    if (u <= 1.0) return std::numeric_limits<double>::infinity();
    return 1.0 / (kPi * r * (u * u - 1.0));
  };
  if (envelope(cap) >= target) return cap;
  double lo = 0.0, hi = cap;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (envelope(mid) < target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

Window build_band_window(double lo, double hi, double transition, double dt, std::size_t length,
                         Window::Kind kind) {
  const Grid1D grid{-static_cast<double>(length / 2) * dt, dt, length};
  return Window(kind, lo, hi, transition, grid);
}

Window build_window(double T, double omega, double dt, std::size_t length, Window::Kind kind) {
  if (!(T > 0.0) || !(omega > 0.0)) throw DomainError("window needs T > 0 and omega > 0");
  const double tw = T * omega;
  if (kind == Window::Kind::kRaisedCosine) {
    if (!(tw < 1.0)) throw DomainError("raised-cosine window needs T * omega < 1");
    return build_band_window(-0.5 * omega, 0.5 * omega, 0.5 / T - 0.5 * omega, dt, length, kind);
  }
  if (tw > 1.0 + 1e-12) throw DomainError("sharp window needs T * omega <= 1");
  return build_band_window(-0.5 * omega, 0.5 * omega, 0.0, dt, length, kind);
}

}  // namespace opws
