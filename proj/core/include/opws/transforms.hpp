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

// Discrete Fourier machinery: unitary DFT, the symplectic Fourier transform
// on a 2-D grid, the Zak transform, a Gaussian STFT mixed-norm diagnostic,
// and the band-limited windows used by the reconstruction series.

#ifndef OPWS_TRANSFORMS_HPP_
#define OPWS_TRANSFORMS_HPP_

#include <optional>
#include <span>

#include "opws/common.hpp"
#include "opws/model.hpp"

namespace opws {

/// Unitary DFT, X[k] = N^{-1/2} sum_n x[n] e^{-2 pi i k n / N}.
CVector dft(std::span<const cplx> v);
/// Inverse of dft.
CVector idft(std::span<const cplx> v);

/// Metadata for a 2-D array: axis 0 samples start at origin0 with step0,
/// axis 1 at origin1 with step1.
struct Grid2D {
  double origin0 = 0.0;
  double step0 = 1.0;
  double origin1 = 0.0;
  double step1 = 1.0;

  friend bool operator==(const Grid2D&, const Grid2D&) = default;
};

struct GriddedArray {
  CMatrix values;
  Grid2D grid;
};

/// Grid version of F^s F(t, nu) = int int F(x, xi) e^{-2 pi i (nu x - xi t)} dx dxi.
///
/// The input is indexed (x, xi) with shape M x N. The output is indexed
/// (t, nu) with shape N x M: axis 0 (t) is dual to the input's axis 1 and
/// axis 1 (nu) to the input's axis 0. Output steps are 1/(N step1) and
/// 1/(M step0) with centered origins -floor(n/2)*step. Values carry the
/// Riemann weight step0*step1, so the map is an isometry for grid-weighted
/// L^2 norms and an involution for centered input grids.
GriddedArray symplectic_dft2(const GriddedArray& in);

/// Closed-form Kohn-Nirenberg symbol tabulated on grid (axis 0: x, axis 1: xi).
GriddedArray kn_symbol_grid(const GroundTruthOperator& op, const Grid2D& grid, std::size_t nx,
                            std::size_t nxi);

/// Zak transform Z f(t, nu) = sum_{lambda in T Z} f(t - lambda) e^{2 pi i lambda nu}
/// on t_i = i * f.dt (i < nt, nt * f.dt <= T) and nu_q = q / (nnu * T).
/// Samples outside f's range count as zero. Throws DomainError unless T is
/// an integer multiple of f.dt.
GriddedArray zak(const SampledSignal& f, double T, std::size_t nt, std::size_t nnu);

/// Discrete mixed l^{p,q} norm of the STFT with the Gaussian window
/// phi(x) = 2^{1/4} e^{-pi x^2}: inner norm over time, outer over frequency.
/// Time centers span f's interval padded by 4 on each side with step
/// `time_step`; frequencies span [-1/(2 f.dt), 1/(2 f.dt)) with step
/// `freq_step`. Sums carry the grid weights so that the value approximates
/// the continuous L^{p,q} norm. p or q may be infinity.
double stft_mixed_norm(const SampledSignal& f, double p, double q, double time_step,
                       double freq_step);

/// Window s with spectrum s^(nu) = int s(x) e^{-2 pi i nu x} dx equal to 1
/// on the passband [lo, hi) and 0 outside [lo - transition, hi + transition).
/// Raised-cosine windows roll off over the transition band; sharp windows
/// have transition 0.
class Window {
 public:
  enum class Kind { kRaisedCosine, kSharp };

  Window(Kind kind, double lo, double hi, double transition, Grid1D grid);

  Kind kind() const { return kind_; }
  double pass_lo() const { return lo_; }
  double pass_hi() const { return hi_; }
  double transition() const { return transition_; }

  /// Closed-form time-domain value s(x).
  cplx value(double x) const;
  double spectrum(double nu) const;
  double peak() const;
  /// Smallest r such that |s(x)| < rel * peak() for all |x| >= r (from a
  /// decay envelope), capped at `cap`.
  double decay_radius(double rel = 1e-8, double cap = 1e6) const;

  /// Time-domain samples on the construction grid: the inverse DFT of the
  /// spectrum on the matching frequency grid, scaled to approximate s(x).
  const SampledSignal& signal() const { return signal_; }

 private:
  Kind kind_;
  double lo_;
  double hi_;
  double transition_;
  SampledSignal signal_;
};

/// Reconstruction window for rectangle sampling with spacing T and band
/// [-omega/2, omega/2): passband that band, stopband edge 1/(2T).
/// Raised-cosine requires T*omega < 1. The sharp window is the indicator
/// of [-omega/2, omega/2) and only needs T*omega <= 1.
Window build_window(double T, double omega, double dt, std::size_t length,
                    Window::Kind kind = Window::Kind::kRaisedCosine);

/// Window with an arbitrary passband [lo, hi) and transition width.
Window build_band_window(double lo, double hi, double transition, double dt, std::size_t length,
                         Window::Kind kind = Window::Kind::kRaisedCosine);

}  // namespace opws

#endif  // OPWS_TRANSFORMS_HPP_
