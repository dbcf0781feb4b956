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
#include <limits>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "opws/transforms.hpp"
#include "test_util.hpp"

using namespace opws;
using opws::testing::norm2;
using opws::testing::random_vector;

namespace {

double grid_norm(const GriddedArray& a) {
  return a.values.norm() * std::sqrt(a.grid.step0 * a.grid.step1);
}

// Direct evaluation of the symplectic transform at one output point.
cplx symplectic_at(const GriddedArray& in, double t, double nu) {
  cplx acc = 0.0;
  for (Eigen::Index a = 0; a < in.values.rows(); ++a) {
    for (Eigen::Index b = 0; b < in.values.cols(); ++b) {
      const double x = in.grid.origin0 + a * in.grid.step0;
      const double xi = in.grid.origin1 + b * in.grid.step1;
      acc += in.values(a, b) * cis2pi(-(nu * x - xi * t));
    }
  }
  return acc * in.grid.step0 * in.grid.step1;
}

}  // namespace

TEST_SUITE("transforms") {

TEST_CASE("dft examples and unitarity") {
  const std::size_t N = 12;
  CVector delta(N, 0.0);
  delta[0] = 1.0;
  for (const auto& v : dft(delta)) CHECK(std::abs(v - 1.0 / std::sqrt(12.0)) < 1e-15);
  const int m = 5;
  CVector tone(N);
  for (std::size_t n = 0; n < N; ++n) tone[n] = cis2pi(static_cast<double>(m * n) / N);
  const auto T = dft(tone);
  for (std::size_t k = 0; k < N; ++k) {
    CHECK(std::abs(T[k] - (k == m ? cplx(std::sqrt(12.0)) : cplx(0.0))) < 1e-13);
  }
  for (std::size_t n : {1u, 7u, 64u, 97u}) {
    const auto v = random_vector(n, n);
    const auto V = dft(v);
    CHECK(norm2(V) == doctest::Approx(norm2(v)).epsilon(1e-12));
    CHECK(opws::testing::max_abs_diff(idft(V), v) <= 1e-12 * norm2(v));
  }
  CHECK_THROWS_AS(dft(CVector{}), DomainError);
}

TEST_CASE("symplectic transform: zeros, brute-force values and separability") {
  GriddedArray zero{CMatrix::Zero(4, 6), {0.0, 1.0, 0.0, 1.0}};
  CHECK(symplectic_dft2(zero).values.norm() == 0.0);
  CHECK(symplectic_dft2(zero).values.rows() == 6);

  const auto u = random_vector(5, 1), w = random_vector(7, 2);
  GriddedArray F{CMatrix(5, 7), {-0.6, 0.3, -1.5, 0.5}};
  for (int a = 0; a < 5; ++a) {
    for (int b = 0; b < 7; ++b) F.values(a, b) = u[a] * w[b];
  }
  const auto G = symplectic_dft2(F);
  REQUIRE(G.values.rows() == 7);
  REQUIRE(G.values.cols() == 5);
  // Separable: G = (inverse-signed transform of w over t) x (forward of u over nu).
  for (int p = 0; p < 7; ++p) {
    for (int q = 0; q < 5; ++q) {
      const double t = G.grid.origin0 + p * G.grid.step0;
      const double nu = G.grid.origin1 + q * G.grid.step1;
      cplx wt = 0.0, un = 0.0;
      for (int b = 0; b < 7; ++b) wt += w[b] * cis2pi((F.grid.origin1 + b * F.grid.step1) * t);
      for (int a = 0; a < 5; ++a) un += u[a] * cis2pi(-(F.grid.origin0 + a * F.grid.step0) * nu);
      CHECK(std::abs(G.values(p, q) - wt * un * F.grid.step0 * F.grid.step1) < 1e-12);
      CHECK(std::abs(G.values(p, q) - symplectic_at(F, t, nu)) < 1e-12);
    }
  }
}

TEST_CASE("symplectic transform is an isometric involution on centered grids") {
  for (auto [M, N] : {std::pair{8, 8}, std::pair{6, 9}, std::pair{5, 4}}) {
    GriddedArray F{CMatrix(M, N), {0, 0.5, 0, 0.25}};
    F.grid.origin0 = -(M / 2) * F.grid.step0;
    F.grid.origin1 = -(N / 2) * F.grid.step1;
    const auto v = random_vector(static_cast<std::size_t>(M * N), 40u + static_cast<unsigned>(M));
    for (int i = 0; i < M * N; ++i) F.values(i / N, i % N) = v[static_cast<std::size_t>(i)];
    const auto G = symplectic_dft2(F);
    CHECK(grid_norm(G) == doctest::Approx(grid_norm(F)).epsilon(1e-10));
    const auto back = symplectic_dft2(G);
    REQUIRE(back.values.rows() == M);
    CHECK((back.values - F.values).norm() <= 1e-10 * F.values.norm());
    CHECK(back.grid.step0 == doctest::Approx(F.grid.step0));
    CHECK(back.grid.origin1 == doctest::Approx(F.grid.origin1));
  }
}

TEST_CASE("zak transform: single period, covariance and direct sum") {
  const double dt = 0.125, T = 1.0;
  // f supported in [0, T).
  CVector s = random_vector(8, 3);
  const SampledSignal f(0.0, dt, s);
  const auto Z = zak(f, T, 8, 4);
  for (int i = 0; i < 8; ++i) {
    for (int q = 0; q < 4; ++q) CHECK(std::abs(Z.values(i, q) - s[static_cast<std::size_t>(i)]) < 1e-15);
  }
  // The same samples placed one period later pick up e^{-2 pi i T nu}.
  const SampledSignal g(T, dt, s);
  const auto Zg = zak(g, T, 8, 4);
  for (int i = 0; i < 8; ++i) {
    for (int q = 0; q < 4; ++q) {
      const double nu = q * Z.grid.step1;
      CHECK(std::abs(Zg.values(i, q) - cis2pi(-T * nu) * Z.values(i, q)) < 1e-14);
    }
  }

  // Two bumps several periods apart against an explicit lambda list.
  CVector two(80, 0.0);
  const auto b1 = random_vector(6, 4, 0), b2 = random_vector(5, 4, 1);
  for (int i = 0; i < 6; ++i) two[static_cast<std::size_t>(10 + i)] = b1[static_cast<std::size_t>(i)];
  for (int i = 0; i < 5; ++i) two[static_cast<std::size_t>(61 + i)] = b2[static_cast<std::size_t>(i)];
  const SampledSignal h(-2.0, dt, two);
  const auto Zh = zak(h, T, 8, 6);
  for (int i = 0; i < 8; ++i) {
    for (int q = 0; q < 6; ++q) {
      const double t = i * dt, nu = q / (6.0 * T);
      cplx acc = 0.0;
      for (int lam = -10; lam <= 10; ++lam) acc += h.interpolate(t - lam * T) * cis2pi(lam * T * nu);
      CHECK(std::abs(Zh.values(i, q) - acc) < 1e-12);
    }
  }
  CHECK_THROWS_AS(zak(f, 0.3, 2, 2), DomainError);
}

TEST_CASE("zak transform quasi-periodicity") {
  const double dt = 0.1, T = 0.5;
  const SampledSignal f(-3.0, dt, random_vector(61, 21));
  const SampledSignal shifted(-3.0 - T, dt, f.samples);  // shifted(x) = f(x + T)
  const auto Z = zak(f, T, 5, 10);
  const auto Zs = zak(shifted, T, 5, 10);
  for (int i = 0; i < 5; ++i) {
    for (int q = 0; q < 10; ++q) {
      const double nu = q * Z.grid.step1;
      CHECK(std::abs(Zs.values(i, q) - cis2pi(T * nu) * Z.values(i, q)) < 1e-10);
      // nu-periodicity against the defining sum at nu + 1/T.
      cplx acc = 0.0;
      for (int lam = -20; lam <= 20; ++lam) acc += f.interpolate(i * dt - lam * T) * cis2pi(lam * T * (nu + 1.0 / T));
      CHECK(std::abs(acc - Z.values(i, q)) < 1e-10);
    }
  }
}

TEST_CASE("stft mixed norm") {
  const double dt = 0.25;
  CHECK(stft_mixed_norm(SampledSignal(0.0, dt, CVector(32, 0.0)), 2, 2, 0.25, 0.25) == 0.0);
  std::vector<double> ratios;
  for (int k = 0; k < 10; ++k) {
    const SampledSignal f(0.0, dt, random_vector(48, 100u + static_cast<unsigned>(k)));
    ratios.push_back(stft_mixed_norm(f, 2, 2, 0.25, 0.25) / f.l2_norm());
  }
  const double mean = std::accumulate(ratios.begin(), ratios.end(), 0.0) / 10.0;
  double var = 0.0;
  for (double r : ratios) var += (r - mean) * (r - mean);
  CHECK(std::sqrt(var / 10.0) / mean <= 0.02);

  const auto v = random_vector(40, 7);
  const SampledSignal f(0.0, dt, v), g(3.3, dt, v);
  for (auto [p, q] : {std::pair{2.0, 2.0}, std::pair{1.0, 2.0}, std::pair{2.0, std::numeric_limits<double>::infinity()}}) {
    const double a = stft_mixed_norm(f, p, q, 0.25, 0.25);
    const double b = stft_mixed_norm(g, p, q, 0.25, 0.25);
    CHECK(std::abs(a - b) <= 0.01 * a);
  }
  CHECK_THROWS_AS(stft_mixed_norm(f, 0.5, 2, 0.25, 0.25), DomainError);
}

TEST_CASE("raised-cosine window spectrum on the DFT grid") {
  const double T = 0.9, omega = 1.0, dt = 1.0 / 8.0;
  const std::size_t N = 512;
  const auto w = build_window(T, omega, dt, N);
  const auto& s = w.signal();
  const double df = 1.0 / (N * dt);
  double worst = 0.0;
  for (long long k = -static_cast<long long>(N / 2); k < static_cast<long long>(N / 2); ++k) {
    const double nu = k * df;
    cplx acc = 0.0;
    for (std::size_t n = 0; n < N; ++n) acc += s.samples[n] * cis2pi(-nu * s.time(n));
    acc *= dt;
    double expect = -1.0;
    if (std::abs(nu) <= omega / 2) expect = 1.0;
    if (std::abs(nu) >= 1.0 / (2.0 * T)) expect = 0.0;
    if (expect >= 0.0) worst = std::max(worst, std::abs(acc - expect));
    worst = std::max(worst, std::abs(acc - w.spectrum(nu)));
  }
  CHECK(worst <= 1e-10);
  // Grid samples are the periodized closed form; the wrap-around tail is ~1e-5 here.
  for (std::size_t n = N / 2 - 40; n < N / 2 + 40; ++n) {
    CHECK(std::abs(s.samples[n] - w.value(s.time(n))) < 1e-4);
  }
  CHECK(w.value(0.0).real() == doctest::Approx(w.peak()));
}

TEST_CASE("window preconditions and the sharp kernel") {
  CHECK_THROWS_AS(build_window(1.0, 1.0, 0.125, 64), DomainError);
  CHECK_THROWS_AS(build_window(1.0, 1.2, 0.125, 64, Window::Kind::kSharp), DomainError);
  const double T = 0.8;
  const auto w = build_window(T, 1.0 / T, 0.1, 64, Window::Kind::kSharp);
  CHECK(w.transition() == 0.0);
  for (double x : {0.0, 0.3, -1.7, 4.0, 12.25}) {
    const double expect = x == 0.0 ? 1.0 : std::sin(kPi * x / T) / (kPi * x / T);
    CHECK(std::abs(T * w.value(x) - expect) < 1e-14);
  }
}

TEST_CASE("window reproduces band-limited vectors under circular convolution") {
  const double T = 0.9, omega = 1.0, dt = 0.125;
  const std::size_t N = 256;
  const auto w = build_window(T, omega, dt, N);
  const double df = 1.0 / (N * dt);
  RandomStream rs(5, 0);
  CVector v(N, 0.0);
  for (long long k = -static_cast<long long>(N / 2); k < static_cast<long long>(N / 2); ++k) {
    if (std::abs(k * df) > omega / 2) continue;
    const cplx a = rs.complex_normal();
    for (std::size_t n = 0; n < N; ++n) v[n] += a * cis2pi(k * df * (static_cast<double>(n) * dt));
  }
  const auto& s = w.signal().samples;  // s[j] at (j - N/2) dt
  double err = 0.0;
  for (std::size_t n = 0; n < N; ++n) {
    cplx acc = 0.0;
    for (std::size_t m = 0; m < N; ++m) {
      const std::size_t d = (n + N - m) % N;
      acc += s[(d + N / 2) % N] * v[m];
    }
    err = std::max(err, std::abs(acc * dt - v[n]));
  }
  CHECK(err <= 1e-8 * norm2(v));
}

TEST_CASE("window decay radius bounds the closed form") {
  const auto w = build_window(1.0, 0.8, 0.125, 64);
  const double r = w.decay_radius(1e-6);
  for (double x = r; x < r + 50.0; x += 0.0731) CHECK(std::abs(w.value(x)) < 1e-6 * w.peak());
  const auto sh = build_window(1.0, 1.0, 0.125, 64, Window::Kind::kSharp);
  CHECK(sh.decay_radius(1e-8, 1e6) == 1e6);
}

}  // TEST_SUITE
