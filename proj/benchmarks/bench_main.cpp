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

#include <benchmark/benchmark.h>

#include <cmath>

#include "opws/gabor.hpp"
#include "opws/geometry.hpp"
#include "opws/identify.hpp"

namespace {

using namespace opws;

void BM_CheckGlpExhaustive(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const auto c = random_unit_vector(L, 0);
  for (auto _ : state) benchmark::DoNotOptimize(check_glp(c).min_abs_det);
  state.counters["subsets"] = static_cast<double>(glp_subset_count(L));
}
BENCHMARK(BM_CheckGlpExhaustive)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_CheckGlpRandomized(benchmark::State& state) {
  const auto c = random_unit_vector(7, 0);
  GlpOptions o;
  o.mode = GlpMode::kRandomized;
  o.trials = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(check_glp(c, o).min_abs_det);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CheckGlpRandomized)->Arg(10000)->Unit(benchmark::kMillisecond);

GroundTruthOperator one_atom() {
  return GroundTruthOperator({SpreadingAtom{cplx(1.0, 0.5), Profile::raised_cosine(0.5, 0.8),
                                            Profile::raised_cosine(0.0, 0.8)}});
}

void BM_ApplyTrain(benchmark::State& state) {
  const auto op = one_atom();
  const double dt = 1.0 / static_cast<double>(state.range(0));
  const Grid1D grid{-40.0, dt, static_cast<std::size_t>(std::llround(80.0 / dt)) + 1};
  for (auto _ : state) benchmark::DoNotOptimize(apply_train(op, DeltaTrain(1.0, 0.0, {1.0}), grid).samples.data());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.n));
}
BENCHMARK(BM_ApplyTrain)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_ReconstructRect(benchmark::State& state) {
  const auto op = one_atom();
  const double dt = 1.0 / 32.0;
  const Window s = build_window(1.0, 0.8, dt, 1024);
  const double span = std::ceil(s.decay_radius()) + 8.0;
  const auto y = apply_train(op, DeltaTrain(1.0, 0.0, {1.0}),
                             Grid1D{-span, dt, static_cast<std::size_t>(std::llround(2.0 * span / dt)) + 1});
  RectOutput o;
  o.x = {-4.0, 4.0 * dt, 64};
  o.radius = s.decay_radius();
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct_rect(y, 1.0, 0.8, s, o).recovered.values.data());
}
BENCHMARK(BM_ReconstructRect)->Unit(benchmark::kMillisecond);

void BM_ReconstructMulticell(benchmark::State& state) {
  const CellCover cover{2, 5, Rational(0), {{0, 0}, {0, 3}, {1, 2}}};
  const auto c = random_unit_vector(5, 0);
  const GroundTruthOperator op(
      {SpreadingAtom{1.0, Profile::raised_cosine(0.25, 0.4), Profile::bspline(4, 0.2, 0.36)},
       SpreadingAtom{cplx(0.3, -0.7), Profile::raised_cosine(0.75, 0.4), Profile::bspline(4, 1.0, 0.36)}});
  const double dt = 1.0 / 64.0;
  const auto y = apply_train(op, DeltaTrain(0.5, 0.0, c), Grid1D{-60.0, dt, 7681});
  MulticellOutput mo;
  mo.nnu = 16;
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct_multicell(y, cover, c, mo).recovered.values.data());
}
BENCHMARK(BM_ReconstructMulticell)->Unit(benchmark::kMillisecond);

void BM_Content(benchmark::State& state) {
  const auto M = SupportSet::rectangles({{Rational(1, 7), Rational(5, 7), Rational(0), Rational(2, 3)},
                                         {Rational(1, 3), Rational(1), Rational(1, 2), Rational(1)}});
  ContentOptions o;
  o.Kmax = o.Lmax = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(content(M, ContentSide::kInner, o).value);
}
BENCHMARK(BM_Content)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
