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

// Operators in four equivalent descriptions.
//
// For an operator H with spreading function eta(t, nu):
//
//   Hf(x)       = int int eta(t, nu) e^{2 pi i nu x} f(x - t) dt dnu
//   h(x, t)     = int eta(t, nu) e^{2 pi i nu x} dnu     (time-varying impulse response)
//   kappa(x, y) = h(x, x - y)                            (kernel)
//   sigma(x, xi)= int h(x, t) e^{-2 pi i xi t} dt        (Kohn-Nirenberg symbol)
//
// The continuous model builds eta from separable atoms whose profiles have
// closed-form Fourier transforms, so h, kappa, sigma and the response to a
// delta train are evaluated without quadrature. The finite model on Z_N is
// exact and periodic.

#ifndef OPWS_MODEL_HPP_
#define OPWS_MODEL_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "opws/common.hpp"
#include "opws/support.hpp"

namespace opws {

/// Uniform grid x_i = t0 + i*dt, i = 0..n-1.
struct Grid1D {
  double t0 = 0.0;
  double dt = 1.0;
  std::size_t n = 0;

  double at(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
  double last() const { return at(n - 1); }
};

struct SampledSignal {
  double t0 = 0.0;
  double dt = 1.0;
  CVector samples;

  SampledSignal() = default;
  SampledSignal(double t0_, double dt_, CVector s);

  std::size_t size() const { return samples.size(); }
  Grid1D grid() const { return {t0, dt, samples.size()}; }
  double time(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
  double end_time() const { return time(samples.size() - 1); }

  /// Index of the sample at time x if x lies on the grid (within 1e-9 of a
  /// step) and inside the sampled range.
  std::optional<std::size_t> index_of(double x) const;
  /// Piecewise-linear interpolant; zero outside [t0, end_time()].
  cplx interpolate(double x) const;
  double l2_norm() const;
};

/// Sum_n w_n delta(x - (n*spacing + offset)) with
/// w_n = weights[n mod P] * e^{2 pi i modulation x_n}.
struct DeltaTrain {
  double spacing = 1.0;
  double offset = 0.0;
  CVector weights{cplx(1.0)};
  double modulation = 0.0;

  DeltaTrain() = default;
  DeltaTrain(double spacing_, double offset_, CVector weights_, double modulation_ = 0.0);

  double position(long long n) const { return static_cast<double>(n) * spacing + offset; }
  cplx weight(long long n) const;
};

/// A compactly supported real bump with a closed-form Fourier transform.
///
/// raised cosine: p(u) = (1 + cos(2 pi (u - center) / width)) / 2 on
///                [center - width/2, center + width/2), peak 1.
/// B-spline:      p(u) = beta_n((u - center) * n / width), the centered
///                cardinal B-spline of order n on the same interval.
class Profile {
 public:
  enum class Kind { kRaisedCosine, kBSpline };

  static Profile raised_cosine(double center, double width);
  static Profile bspline(int order, double center, double width);

  Kind kind() const { return kind_; }
  double center() const { return center_; }
  double width() const { return width_; }
  int order() const { return order_; }
  double lower() const { return center_ - 0.5 * width_; }
  double upper() const { return center_ + 0.5 * width_; }

  double operator()(double u) const;
  /// int p(u) e^{2 pi i u x} du.
  cplx fourier(double x) const;
  /// Points where the profile is not analytic (support ends, spline knots).
  std::vector<double> breakpoints() const;
  double max_value() const;

 private:
  Profile(Kind kind, int order, double center, double width);
  Kind kind_;
  int order_;
  double center_;
  double width_;
};

/// <p, q> in L^2(R), evaluated exactly piece by piece (Gauss-Legendre
/// between joint breakpoints, exact for the polynomial pieces).
double inner_product(const Profile& p, const Profile& q);

struct SpreadingAtom {
  cplx coeff{1.0};
  Profile t_profile;
  Profile nu_profile;
};

class GroundTruthOperator {
 public:
  GroundTruthOperator() = default;
  /// Throws DomainError if an atom's support box is not inside `support`.
  GroundTruthOperator(std::vector<SpreadingAtom> atoms, SupportSet support);
  /// Declared support is the union of the atoms' support boxes.
  explicit GroundTruthOperator(std::vector<SpreadingAtom> atoms);

  const std::vector<SpreadingAtom>& atoms() const { return atoms_; }
  const SupportSet& declared_support() const { return support_; }

  /// Smallest t-interval containing every atom's time support.
  std::pair<double, double> time_extent() const;

 private:
  std::vector<SpreadingAtom> atoms_;
  SupportSet support_;
};

cplx eval_spreading(const GroundTruthOperator& op, double t, double nu);
cplx impulse_response(const GroundTruthOperator& op, double x, double t);
cplx kernel(const GroundTruthOperator& op, double x, double y);
/// Closed-form Kohn-Nirenberg symbol.
cplx kn_symbol(const GroundTruthOperator& op, double x, double xi);

struct QuadratureConfig {
  /// Trapezoid step in t; 0 selects f.dt / 8. Must divide f.dt.
  double step = 0.0;
  /// Output grid; when absent, every sample time of f whose shifts are
  /// covered by f's interval.
  std::optional<Grid1D> out;
};

/// Hf(x) = int h(x, t) f(x - t) dt by trapezoid quadrature in t, with f
/// read through its piecewise-linear interpolant. Throws DomainError when f
/// cannot supply f(x - t) over the operator's time support.
SampledSignal apply(const GroundTruthOperator& op, const SampledSignal& f,
                    const QuadratureConfig& quad = {});

/// Exact response to a delta train,
/// Hg(x) = sum_n w_n h(x, x - x_n), on the given grid.
SampledSignal apply_train(const GroundTruthOperator& op, const DeltaTrain& g, const Grid1D& grid);

/// ||eta||_{L^2(R^2)} = Hilbert-Schmidt norm, from closed-form inner products.
double hs_norm(const GroundTruthOperator& op);

/// Operator on C^N with spreading coefficients eta(k, m):
/// (Hf)[n] = sum_{k,m} eta(k, m) e^{2 pi i m n / N} f[(n - k) mod N].
struct DiscreteOperator {
  std::size_t N = 0;
  CMatrix eta;  // N x N, rows: time shift k, cols: frequency shift m

  explicit DiscreteOperator(std::size_t n = 0) : N(n), eta(CMatrix::Zero(n, n)) {}
  explicit DiscreteOperator(CMatrix e);
};

CVector discrete_apply(const DiscreteOperator& op, std::span<const cplx> f);

}  // namespace opws

#endif  // OPWS_MODEL_HPP_
