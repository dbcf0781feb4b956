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

#include "opws/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/quadrature/gauss.hpp>

#include "opws/parallel.hpp"

namespace opws {

SampledSignal::SampledSignal(double t0_, double dt_, CVector s)
    : t0(t0_), dt(dt_), samples(std::move(s)) {
  if (!(dt > 0.0) || !std::isfinite(dt) || !std::isfinite(t0)) {
    throw DomainError("signal step must be positive and finite");
  }
  for (const auto& v : samples) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw DomainError("signal samples must be finite");
    }
  }
}

std::optional<std::size_t> SampledSignal::index_of(double x) const {
  const double r = (x - t0) / dt;
  const double i = std::round(r);
  if (std::abs(r - i) > 1e-9 || i < 0 || i >= static_cast<double>(samples.size())) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(i);
}

cplx SampledSignal::interpolate(double x) const {
  if (samples.empty()) return 0.0;
  const double r = (x - t0) / dt;
  const double n1 = static_cast<double>(samples.size() - 1);
  if (r < -1e-9 || r > n1 + 1e-9) return 0.0;
  const double rc = std::clamp(r, 0.0, n1);
  auto i = static_cast<std::size_t>(std::floor(rc));
  if (i + 1 >= samples.size()) return samples.back();
  const double w = rc - static_cast<double>(i);
  return (1.0 - w) * samples[i] + w * samples[i + 1];
}

double SampledSignal::l2_norm() const {
  double acc = 0.0;
  for (const auto& v : samples) acc += std::norm(v);
  return std::sqrt(acc * dt);
}

DeltaTrain::DeltaTrain(double spacing_, double offset_, CVector weights_, double modulation_)
    : spacing(spacing_), offset(offset_), weights(std::move(weights_)), modulation(modulation_) {
  if (!(spacing > 0.0)) throw DomainError("delta train spacing must be positive");
  if (weights.empty() ||
      std::none_of(weights.begin(), weights.end(), [](cplx w) { return w != cplx(0.0); })) {
    throw DomainError("delta train needs a nonzero weight");
  }
}

cplx DeltaTrain::weight(long long n) const {
  const auto p = static_cast<long long>(weights.size());
  const cplx w = weights[static_cast<std::size_t>(((n % p) + p) % p)];
  return modulation == 0.0 ? w : w * cis2pi(modulation * position(n));
}

Profile::Profile(Kind kind, int order, double center, double width)
    : kind_(kind), order_(order), center_(center), width_(width) {
  if (!(width > 0.0) || !std::isfinite(width) || !std::isfinite(center)) {
    throw DomainError("profile width must be positive");
  }
}

Profile Profile::raised_cosine(double center, double width) {
  return Profile(Kind::kRaisedCosine, 0, center, width);
}

Profile Profile::bspline(int order, double center, double width) {
  if (order < 1 || order > 20) throw DomainError("B-spline order must be in [1, 20]");
  return Profile(Kind::kBSpline, order, center, width);
}

namespace {

// Centered cardinal B-spline of order n (support [-n/2, n/2), unit integral).
double cardinal_bspline(int n, double x) {
  const double half = 0.5 * n;
  if (x < -half || x >= half) return 0.0;
  double acc = 0.0;
  double binom = 1.0;
  for (int k = 0; k <= n; ++k) {
    const double y = x + half - k;
    if (y >= 0.0) acc += ((k % 2) ? -binom : binom) * std::pow(y, n - 1);
    binom = binom * (n - k) / (k + 1);
  }
  double fact = 1.0;
  for (int k = 2; k < n; ++k) fact *= k;
  return std::max(0.0, acc / fact);
}

}  // namespace

double Profile::operator()(double u) const {
  const double v = u - center_;
  if (kind_ == Kind::kRaisedCosine) {
    if (std::abs(v) >= 0.5 * width_) return 0.0;
    return 0.5 * (1.0 + std::cos(kTwoPi * v / width_));
  }
  const double a = width_ / order_;
  return cardinal_bspline(order_, v / a);
}

cplx Profile::fourier(double x) const {
  const cplx phase = cis2pi(center_ * x);
  if (kind_ == Kind::kRaisedCosine) {
    const double wx = width_ * x;
    return phase * (0.5 * width_ * (sinc(wx) + 0.5 * sinc(wx + 1.0) + 0.5 * sinc(wx - 1.0)));
  }
  const double a = width_ / order_;
  return phase * (a * std::pow(sinc(a * x), order_));
}

std::vector<double> Profile::breakpoints() const {
  if (kind_ == Kind::kRaisedCosine) return {lower(), upper()};
  std::vector<double> out;
  const double a = width_ / order_;
  for (int k = 0; k <= order_; ++k) out.push_back(lower() + k * a);
  return out;
}

double Profile::max_value() const {
  if (kind_ == Kind::kRaisedCosine) return 1.0;
  return cardinal_bspline(order_, 0.0);
}

double inner_product(const Profile& p, const Profile& q) {
  const double lo = std::max(p.lower(), q.lower());
  const double hi = std::min(p.upper(), q.upper());
  if (!(lo < hi)) return 0.0;
  std::vector<double> cuts{lo, hi};
  for (const auto* prof : {&p, &q}) {
    for (double b : prof->breakpoints()) {
      if (lo < b && b < hi) cuts.push_back(b);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    acc += boost::math::quadrature::gauss<double, 30>::integrate(
        [&](double u) { return p(u) * q(u); }, cuts[i], cuts[i + 1]);
  }
  return acc;
}

namespace {

Rect atom_box(const SpreadingAtom& a) {
  return {Rational::from_double(a.t_profile.lower()), Rational::from_double(a.t_profile.upper()),
          Rational::from_double(a.nu_profile.lower()), Rational::from_double(a.nu_profile.upper())};
}

}  // namespace

GroundTruthOperator::GroundTruthOperator(std::vector<SpreadingAtom> atoms, SupportSet support)
    : atoms_(std::move(atoms)), support_(std::move(support)) {
  for (const auto& a : atoms_) {
    if (!support_.covers_box(atom_box(a))) {
      throw DomainError("atom support box is not inside the declared support");
    }
  }
}

GroundTruthOperator::GroundTruthOperator(std::vector<SpreadingAtom> atoms) : atoms_(std::move(atoms)) {
  std::vector<Rect> boxes;
  for (const auto& a : atoms_) boxes.push_back(atom_box(a));
  support_ = SupportSet::rectangles(std::move(boxes));
}

std::pair<double, double> GroundTruthOperator::time_extent() const {
  if (atoms_.empty()) return {0.0, 0.0};
  double lo = atoms_.front().t_profile.lower();
  double hi = atoms_.front().t_profile.upper();
  for (const auto& a : atoms_) {
    lo = std::min(lo, a.t_profile.lower());
    hi = std::max(hi, a.t_profile.upper());
  }
  return {lo, hi};
}

cplx eval_spreading(const GroundTruthOperator& op, double t, double nu) {
  if (!op.declared_support().contains(t, nu)) return 0.0;
  cplx acc = 0.0;
  for (const auto& a : op.atoms()) acc += a.coeff * a.t_profile(t) * a.nu_profile(nu);
  return acc;
}

cplx impulse_response(const GroundTruthOperator& op, double x, double t) {
  cplx acc = 0.0;
  for (const auto& a : op.atoms()) {
    const double pt = a.t_profile(t);
    if (pt != 0.0) acc += a.coeff * pt * a.nu_profile.fourier(x);
  }
  return acc;
}

cplx kernel(const GroundTruthOperator& op, double x, double y) {
  return impulse_response(op, x, x - y);
}

cplx kn_symbol(const GroundTruthOperator& op, double x, double xi) {
  cplx acc = 0.0;
  for (const auto& a : op.atoms()) {
    acc += a.coeff * a.t_profile.fourier(-xi) * a.nu_profile.fourier(x);
  }
  return acc;
}

SampledSignal apply(const GroundTruthOperator& op, const SampledSignal& f,
                    const QuadratureConfig& quad) {
  const double step = quad.step > 0.0 ? quad.step : f.dt / 8.0;
  const double ratio = f.dt / step;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
    throw DomainError("quadrature step must divide the signal step");
  }
  if (f.size() == 0) throw DomainError("empty input signal");
  const auto [tlo, thi] = op.time_extent();

  Grid1D out;
  if (quad.out) {
    out = *quad.out;
  } else {
    // Sample times x of f with x - t inside f's interval for all t in the time support.
    const double first = f.t0 + thi;
    const double last = f.end_time() + tlo;
    const double i0 = std::ceil((first - f.t0) / f.dt - 1e-9);
    const double i1 = std::floor((last - f.t0) / f.dt + 1e-9);
    if (i1 < i0) throw DomainError("input signal is too short for the operator's time support");
    out = {f.time(static_cast<std::size_t>(i0)), f.dt, static_cast<std::size_t>(i1 - i0) + 1};
  }
  if (out.n == 0) return SampledSignal(out.t0, out.dt, {});
  const double tol = 1e-9 * f.dt;
  if (out.t0 - thi < f.t0 - tol || out.last() - tlo > f.end_time() + tol) {
    throw DomainError("input signal does not cover the shifts needed on the output grid");
  }

  // Quadrature nodes k * step over the time support; end values vanish.
  const auto k0 = static_cast<long long>(std::floor(tlo / step));
  const auto k1 = static_cast<long long>(std::ceil(thi / step));
  const std::size_t nodes = op.atoms().empty() ? 0 : static_cast<std::size_t>(k1 - k0 + 1);
  std::vector<std::vector<double>> tw(op.atoms().size(), std::vector<double>(nodes));
  for (std::size_t a = 0; a < op.atoms().size(); ++a) {
    for (std::size_t k = 0; k < nodes; ++k) {
      tw[a][k] = op.atoms()[a].t_profile(static_cast<double>(k0 + static_cast<long long>(k)) * step);
    }
  }

  CVector values(out.n);
  parallel_chunks(out.n, default_threads(), [&](std::size_t begin, std::size_t end, unsigned) {
    for (std::size_t i = begin; i < end; ++i) {
      const double x = out.at(i);
      cplx acc = 0.0;
      for (std::size_t a = 0; a < op.atoms().size(); ++a) {
        cplx inner = 0.0;
        for (std::size_t k = 0; k < nodes; ++k) {
          if (tw[a][k] == 0.0) continue;
          inner += tw[a][k] * f.interpolate(x - static_cast<double>(k0 + static_cast<long long>(k)) * step);
        }
        const auto& atom = op.atoms()[a];
        acc += atom.coeff * atom.nu_profile.fourier(x) * inner;
      }
      values[i] = acc * step;
    }
  });
  return SampledSignal(out.t0, out.dt, std::move(values));
}

SampledSignal apply_train(const GroundTruthOperator& op, const DeltaTrain& g, const Grid1D& grid) {
  const auto [tlo, thi] = op.time_extent();
  CVector values(grid.n);
  parallel_chunks(grid.n, default_threads(), [&](std::size_t begin, std::size_t end, unsigned) {
    for (std::size_t i = begin; i < end; ++i) {
      const double x = grid.at(i);
      const auto n0 = static_cast<long long>(std::ceil((x - thi - g.offset) / g.spacing));
      const auto n1 = static_cast<long long>(std::floor((x - tlo - g.offset) / g.spacing));
      cplx acc = 0.0;
      for (long long n = n0; n <= n1; ++n) {
        acc += g.weight(n) * impulse_response(op, x, x - g.position(n));
      }
      values[i] = acc;
    }
  });
  return SampledSignal(grid.t0, grid.dt, std::move(values));
}

double hs_norm(const GroundTruthOperator& op) {
  const auto& atoms = op.atoms();
  double acc = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      const double g = inner_product(atoms[i].t_profile, atoms[j].t_profile) *
                       inner_product(atoms[i].nu_profile, atoms[j].nu_profile);
      if (g != 0.0) acc += (atoms[i].coeff * std::conj(atoms[j].coeff)).real() * g;
    }
  }
  return std::sqrt(std::max(0.0, acc));
}

DiscreteOperator::DiscreteOperator(CMatrix e) : N(static_cast<std::size_t>(e.rows())), eta(std::move(e)) {
  if (eta.rows() != eta.cols()) throw SizeMismatchError("discrete spreading array must be square");
  if (N == 0) throw DomainError("discrete operator needs N >= 1");
}

CVector discrete_apply(const DiscreteOperator& op, std::span<const cplx> f) {
  const std::size_t n = op.N;
  if (f.size() != n) throw SizeMismatchError("signal length does not match operator size");
  std::vector<cplx> root(n);
  for (std::size_t r = 0; r < n; ++r) root[r] = cis2pi(static_cast<double>(r) / static_cast<double>(n));
  CVector out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t m = 0; m < n; ++m) {
      const cplx e = op.eta(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m));
      if (e == cplx(0.0)) continue;
      for (std::size_t j = 0; j < n; ++j) {
        out[j] += e * root[(m * j) % n] * f[(j + n - k) % n];
      }
    }
  }
  return out;
}

}  // namespace opws
