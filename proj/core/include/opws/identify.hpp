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

// Reconstruction engines.
//
// Rectangle / lattice sampling. For g = sum_n delta_{nT + o} and
// supp eta in A x B with |A| <= T and |B| + 2 eps <= 1/T,
//
//   h(x + t, t) = T sum_n (Hg)(t + o + nT) s(x - o - nT),   t in A,
//
// where s^ = 1 on B and vanishes outside B + [-eps, eps). Equivalently, in
// the Zak domain,
//
//   eta(t, nu) = T s^(nu) e^{-2 pi i nu t} sum_n (Hg)(t + o + nT) e^{-2 pi i nu (o + nT)}.
//
// Multi-cell sampling. For g = sum_n c_{n mod L} delta_{n/K} and eta
// supported in cells (k, l) of the (K, L) grid, the coset observations
//
//   Z_j(t, nu) = sum_m (Hg)(t + (mL + j)/K) e^{-2 pi i nu (t + (mL + j)/K)}
//
// for (t, nu) in [0, 1/K) x [0, K/L) satisfy
//
//   Z_j = (K/L) sum_{cells} (pi(k, l) c)_j eta(t + k/K, nu + lK/L) e^{2 pi i l K t / L},
//
// an L x |cells| linear system with the Gabor submatrix of c.

#ifndef OPWS_IDENTIFY_HPP_
#define OPWS_IDENTIFY_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "opws/gabor.hpp"
#include "opws/geometry.hpp"
#include "opws/model.hpp"
#include "opws/transforms.hpp"

namespace opws {

struct ReconstructionReport {
  /// "h(x+t,t)" (axis 0: t, axis 1: x) or "eta" (axis 0: t, axis 1: nu).
  std::string quantity;
  GriddedArray recovered;
  /// Zak-domain eta on (t, nu), when requested.
  std::optional<GriddedArray> eta;
  /// Relative L2 error against ground truth; NaN when none was supplied.
  double rel_l2_error = 0.0;
  std::vector<double> per_cell_condition;
  double residual = 0.0;
  double truncation_radius = 0.0;
  nlohmann::json settings;
};

struct RectOutput {
  /// t step = t_stride * y.dt.
  int t_stride = 1;
  /// x axis of the h(x + t, t) output.
  Grid1D x{};
  /// When > 0, also tabulate eta on nu_q = nu0 + q * dnu, q < nnu.
  std::size_t nnu = 0;
  double nu0 = 0.0;
  double dnu = 0.0;
  /// Series truncation |x - x_n| <= radius; 0 picks the window's 1e-8
  /// decay radius.
  double radius = 0.0;
};

/// Interval [lo, hi).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

struct LatticeSpec {
  double period = 1.0;
  double offset = 0.0;
};

ReconstructionReport reconstruct_rect(const SampledSignal& y, double T, double omega,
                                      const Window& s, const RectOutput& out,
                                      const GroundTruthOperator* truth = nullptr);

ReconstructionReport reconstruct_lattice(const SampledSignal& y, Interval A, Interval B,
                                         const LatticeSpec& lattice, const Window& s,
                                         const RectOutput& out,
                                         const GroundTruthOperator* truth = nullptr);

struct UnmixingSystem {
  int L = 0;
  int K = 0;
  CellPattern cells;
  CMatrix matrix;       // L x |cells|
  CMatrix pseudo_inverse;  // |cells| x L
  double condition = 0.0;
  /// ||row j of pinv|| * ||matrix||, >= 1; the noise gain of unknown j.
  std::vector<double> per_cell_condition;

  /// Least-squares solution of matrix * x = z.
  CVector solve(std::span<const cplx> z) const;
};

/// Throws SingularSystemError when the condition number exceeds cond_cap.
UnmixingSystem build_unmixing(const CellCover& cover, std::span<const cplx> c,
                              double cond_cap = 1e6);

struct MulticellOutput {
  int t_stride = 1;       // t step = t_stride * y.dt, must divide 1/K
  std::size_t nnu = 8;    // nu samples per cell height K/L
  double radius = 0.0;    // |x - t| <= radius for the coset sums; 0 = all of y
  double cond_cap = 1e6;
};

/// Recovers eta on the cover's cells from the response to
/// g = sum_n c_{n mod L} delta_{n/K}. Output axis 0: t in [0, 1), axis 1:
/// nu in [0, K); points outside the cover are zero.
ReconstructionReport reconstruct_multicell(const SampledSignal& y, const CellCover& cover,
                                           std::span<const cplx> c, const MulticellOutput& out,
                                           const GroundTruthOperator* truth = nullptr);

/// m(x) = T sum_k m(kT) s(x - kT), with samples.t0 = k0 T and samples.dt = T.
SampledSignal identify_function(const SampledSignal& samples, double T, double omega,
                                const Window& s, const Grid1D& out, double radius = 0.0);

/// The response to a single delta at 0 is the impulse response.
SampledSignal identify_convolution(const SampledSignal& y);

struct SweepRow {
  int area_cells = 0;
  int trial = 0;
  double sigma_min = 0.0;
  bool flagged = false;
};

/// For each |Gamma| in area_cells and each trial, takes the first |Gamma|
/// cells of a random permutation of Z_L x Z_L (one permutation per trial,
/// stream = trial) and records sigma_min of the L x |Gamma| Gabor
/// submatrix. |Gamma| > L is flagged underdetermined with sigma_min 0.
std::vector<SweepRow> conditioning_sweep(int L, std::span<const cplx> c,
                                         const std::vector<int>& area_cells, int trials,
                                         std::uint64_t seed);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);

/// ||a - b|| / ||b|| over matching entries.
double rel_l2(const CMatrix& a, const CMatrix& b);

}  // namespace opws

#endif  // OPWS_IDENTIFY_HPP_
