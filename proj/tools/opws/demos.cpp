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
#include <cstdio>
#include <functional>

#include "context.hpp"
#include "opws/gabor.hpp"
#include "opws/geometry.hpp"
#include "opws/identify.hpp"
#include "opws/rng.hpp"

namespace opws::cli {
namespace {

struct DemoResult {
  std::string metric;
  double value = 0.0;
  double tolerance = 0.0;
  json details = json::object();
};

// Noise raises the bar by 3 x gain x realized noise level.
double noisy_tolerance(const Context& ctx, double base, double gain, double level) {
  return ctx.tolerance_or(base + 3.0 * gain * level);
}

DemoResult shannon(const Context& ctx, std::optional<double> snr_db, Outputs& out) {
  ctx.check_keys({"T", "omega", "radius", "frequencies"}, "demo shannon");
  const double T = ctx.number("T", 0.9);
  const double omega = ctx.number("omega", 1.0);
  std::vector<double> freqs{0.1, -0.35, 0.45};
  if (ctx.has("frequencies")) freqs = ctx.config.at("frequencies").get<std::vector<double>>();
  for (double f : freqs) {
    if (!(std::abs(f) < omega / 2)) throw SchemaError("demo shannon: frequencies must lie inside (-omega/2, omega/2)");
  }
  RandomStream rs(ctx.seed_or(0), 0);
  CVector coeffs(freqs.size());
  for (auto& a : coeffs) a = rs.complex_normal();
  auto m = [&](double x) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < freqs.size(); ++i) acc += coeffs[i] * cis2pi(freqs[i] * x);
    return acc;
  };

  const Window s = build_window(T, omega, T / 16.0, 1024);
  const double radius = ctx.number("radius", s.decay_radius());
  const Grid1D grid{-10.0, 0.05, 401};
  const auto k = static_cast<long long>(std::ceil((radius + 12.0) / T));
  CVector v;
  for (long long i = -k; i <= k; ++i) v.push_back(m(static_cast<double>(i) * T));
  double level = 0.0;
  if (snr_db) level = add_noise(v, *snr_db, ctx.seed_or(0));
  const auto rec = identify_function(SampledSignal(static_cast<double>(-k) * T, T, std::move(v)), T, omega,
                                     s, grid, radius);
  double worst = 0.0;
  for (std::size_t i = grid.n / 4; i < 3 * grid.n / 4; ++i) worst = std::max(worst, std::abs(rec.samples[i] - m(grid.at(i))));

  out.text("shannon.csv", signal_to_csv(rec));
  DemoResult r{"maxAbsError", worst, noisy_tolerance(ctx, 1e-6, 1.0, level), {}};
  r.details = {{"T", T}, {"omega", omega}, {"radius", radius}, {"frequencies", freqs},
               {"coefficients", to_json(coeffs)}, {"samples", 2 * k + 1}, {"noiseLevel", level},
               {"signal", "shannon.csv"}};
  return r;
}

DemoResult convolution(const Context& ctx, std::optional<double> snr_db, Outputs& out) {
  ctx.check_keys({"N", "taps"}, "demo convolution");
  const auto N = static_cast<std::size_t>(ctx.integer("N", 64));
  const auto ntaps = static_cast<std::size_t>(ctx.integer("taps", 8));
  if (N < 1 || ntaps < 1 || ntaps > N) throw SchemaError("demo convolution: need 1 <= taps <= N");
  RandomStream rs(ctx.seed_or(0), 0);
  DiscreteOperator op(N);
  CVector h(N, 0.0);
  for (std::size_t k = 0; k < ntaps; ++k) {
    h[k] = rs.complex_normal();
    op.eta(static_cast<Eigen::Index>(k), 0) = h[k];
  }
  CVector delta(N, 0.0);
  delta[0] = 1.0;
  CVector y = discrete_apply(op, delta);
  double level = 0.0;
  if (snr_db) level = add_noise(y, *snr_db, ctx.seed_or(0));
  const auto got = identify_convolution(SampledSignal(0.0, 1.0, std::move(y)));
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    num += std::norm(got.samples[i] - h[i]);
    den += std::norm(h[i]);
  }
  out.text("convolution.csv", signal_to_csv(got));
  DemoResult r{"relL2Error", std::sqrt(num / den), noisy_tolerance(ctx, 1e-10, 1.0, level), {}};
  r.details = {{"N", N}, {"taps", ntaps}, {"noiseLevel", level}, {"impulseResponse", "convolution.csv"}};
  return r;
}

GroundTruthOperator config_operator(const Context& ctx, GroundTruthOperator fallback) {
  return ctx.has("operator") ? operator_from_json(ctx.config.at("operator")) : std::move(fallback);
}

DemoResult rect(const Context& ctx, std::optional<double> snr_db, Outputs& out) {
  ctx.check_keys({"operator", "T", "omega", "dt", "radius"}, "demo rect");
  const double T = ctx.number("T", 1.0);
  const double omega = ctx.number("omega", 0.8);
  const double dt = ctx.number("dt", T / 32.0);
  const auto op = config_operator(ctx, GroundTruthOperator({SpreadingAtom{
      cplx(1.0, 0.5), Profile::raised_cosine(0.5 * T, 0.8 * T), Profile::raised_cosine(0.0, omega)}}));
  const Window s = build_window(T, omega, dt, 1024);
  const double radius = ctx.number("radius", s.decay_radius());
  const double span = std::ceil(radius) + 8.0 * T;
  auto y = apply_train(op, DeltaTrain(T, 0.0, {1.0}), Grid1D{-span, dt, static_cast<std::size_t>(std::llround(2.0 * span / dt)) + 1});
  double level = 0.0;
  if (snr_db) level = add_noise(y.samples, *snr_db, ctx.seed_or(0));
  RectOutput o;
  o.x = {-4.0, 4.0 * dt, static_cast<std::size_t>(std::llround(8.0 / (4.0 * dt)))};
  o.radius = radius;
  o.nnu = 32;
  o.nu0 = -omega / 2;
  o.dnu = omega / 32.0;
  const auto rep = reconstruct_rect(y, T, omega, s, o, &op);
  out.array("rect_recovered", rep.recovered);
  out.array("rect_recovered_eta", *rep.eta);
  DemoResult r{"relL2Error", rep.rel_l2_error, noisy_tolerance(ctx, 1e-3, 1.0, level), {}};
  r.details = to_json(rep, "rect_recovered");
  r.details["noiseLevel"] = level;
  r.details["operator"] = to_json(op);
  r.details["normRatio"] = y.l2_norm() / hs_norm(op);
  return r;
}

DemoResult multicell(const Context& ctx, std::optional<double> snr_db, Outputs& out) {
  ctx.check_keys({"operator", "cover", "identifier", "dt", "span", "nnu"}, "demo multicell");
  const CellCover cover = ctx.has("cover") ? cover_from_json(ctx.config.at("cover"))
                                           : CellCover{2, 5, Rational(0), {{0, 0}, {0, 3}, {1, 2}}};
  const CVector c = ctx.has("identifier") ? identifier_from_json(ctx.config.at("identifier"))
                                          : random_unit_vector(cover.L, ctx.seed_or(0));
  if (static_cast<int>(c.size()) != cover.L) throw SchemaError("demo multicell: identifier length must equal L");
  const auto op = config_operator(
      ctx, GroundTruthOperator(
               {SpreadingAtom{1.0, Profile::raised_cosine(0.25, 0.4), Profile::bspline(4, 0.2, 0.36)},
                SpreadingAtom{cplx(0.3, -0.7), Profile::raised_cosine(0.75, 0.4), Profile::bspline(4, 1.0, 0.36)},
                SpreadingAtom{cplx(-0.5, 0.2), Profile::raised_cosine(0.25, 0.4), Profile::bspline(4, 1.4, 0.36)}}));
  const double dt = ctx.number("dt", 1.0 / 64.0);
  const double span = ctx.number("span", 60.0);
  auto y = apply_train(op, DeltaTrain(1.0 / cover.K, 0.0, c),
                       Grid1D{-span, dt, static_cast<std::size_t>(std::llround(2.0 * span / dt)) + 1});
  double level = 0.0;
  if (snr_db) level = add_noise(y.samples, *snr_db, ctx.seed_or(0));
  MulticellOutput mo;
  mo.nnu = static_cast<std::size_t>(ctx.integer("nnu", 16));
  const auto rep = reconstruct_multicell(y, cover, c, mo, &op);
  const double gain = *std::max_element(rep.per_cell_condition.begin(), rep.per_cell_condition.end());
  out.array("multicell_recovered", rep.recovered);
  DemoResult r{"relL2Error", rep.rel_l2_error, noisy_tolerance(ctx, 1e-2, gain, level), {}};
  r.details = to_json(rep, "multicell_recovered");
  r.details["noiseLevel"] = level;
  r.details["cover"] = to_json(cover);
  r.details["identifier"] = to_json(c);
  return r;
}

}  // namespace

int run_demo(const Context& ctx, const std::string& name, std::optional<double> snr_db) {
  static const std::vector<std::pair<std::string, std::function<DemoResult(const Context&, std::optional<double>, Outputs&)>>>
      demos{{"shannon", shannon}, {"convolution", convolution}, {"rect", rect}, {"multicell", multicell}};
  const auto it = std::find_if(demos.begin(), demos.end(), [&](const auto& d) { return d.first == name; });
  if (it == demos.end()) throw SchemaError("unknown demo '" + name + "'");
  Outputs out(ctx.out);
  const DemoResult r = it->second(ctx, snr_db, out);
  const bool pass = r.value <= r.tolerance;
  json report = {{"demo", name},
                 {"seed", ctx.seed_or(0)},
                 {"metric", r.metric},
                 {"value", r.value},
                 {"tolerance", r.tolerance},
                 {"pass", pass},
                 {"report", r.details}};
  if (snr_db) report["snrDb"] = *snr_db;
  out.json_file(name + ".json", report);
  out.commit();
  std::printf("%s: %s = %.3e (tolerance %.1e) %s\n", name.c_str(), r.metric.c_str(), r.value, r.tolerance,
              pass ? "PASS" : "FAIL");
  return pass ? kOk : kFailed;
}

}  // namespace opws::cli
