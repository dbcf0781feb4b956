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

#include "opws/identify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include "opws/parallel.hpp"
#include "opws/rng.hpp"

namespace opws {

namespace {

// Integer n with x = n * step (relative tolerance 1e-9), else DomainError.
long long exact_multiple(double x, double step, const char* what) {
  const double r = x / step;
  const double n = std::round(r);
  if (std::abs(r - n) > 1e-9 * std::max(1.0, std::abs(r))) throw DomainError(what);
  return static_cast<long long>(n);
}

const char* window_kind(const Window& s) {
  return s.kind() == Window::Kind::kSharp ? "sharp" : "raised-cosine";
}

}  // namespace

double rel_l2(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw SizeMismatchError("arrays must have the same shape");
  }
  const double diff = (a - b).norm();
  const double ref = b.norm();
  return ref > 0.0 ? diff / ref : diff;
}

ReconstructionReport reconstruct_lattice(const SampledSignal& y, Interval A, Interval B,
                                         const LatticeSpec& lattice, const Window& s,
                                         const RectOutput& out, const GroundTruthOperator* truth) {
  const double T = lattice.period;
  if (!(T > 0.0)) throw DomainError("lattice period must be positive");
  if (!(A.lo < A.hi) || A.length() > T * (1.0 + 1e-12)) {
    throw DomainError("time support must lie in a fundamental domain of the lattice");
  }
  if (!(B.lo < B.hi)) throw DomainError("frequency support must be nonempty");
  const double tol = 1e-12;
  if (s.pass_lo() > B.lo + tol || s.pass_hi() < B.hi - tol) {
    throw DomainError("window passband must contain the frequency support");
  }
  if ((s.pass_hi() - s.pass_lo()) + 2.0 * s.transition() > 1.0 / T + tol) {
    throw DomainError("window spectrum must fit a fundamental domain of the dual lattice");
  }
  if (out.t_stride < 1) throw DomainError("t_stride must be positive");
  if (y.size() == 0) throw DomainError("empty response");

  const long long P = exact_multiple(T, y.dt, "lattice period is not a multiple of the sample step");
  if (P < 1) throw DomainError("lattice period is shorter than the sample step");
  // Sample index of the lattice point o + nT is base + n P.
  const long long base = exact_multiple(lattice.offset - y.t0, y.dt,
                                        "lattice offset is not on the sample grid");
  const double tstep = out.t_stride * y.dt;
  // First t >= A.lo on the sample grid shifted by -offset.
  const auto i_first = static_cast<long long>(std::ceil(A.lo / y.dt - 1e-9));
  std::vector<long long> tidx;  // t = tidx * dt
  for (long long i = i_first; static_cast<double>(i) * y.dt < A.hi - 1e-12 * T; i += out.t_stride) {
    tidx.push_back(i);
  }
  const double radius = out.radius > 0.0 ? out.radius : s.decay_radius();
  const auto size = static_cast<long long>(y.size());
  const auto nt = static_cast<Eigen::Index>(tidx.size());
  const auto nx = static_cast<Eigen::Index>(out.x.n);

  ReconstructionReport rep;
  rep.quantity = "h(x+t,t)";
  rep.truncation_radius = radius;
  rep.recovered.values = CMatrix::Zero(nt, nx);
  rep.recovered.grid = {tidx.empty() ? A.lo : static_cast<double>(tidx.front()) * y.dt, tstep,
                        out.x.t0, out.x.dt};

  // Range of n whose sample y(t + o + nT) exists for sample index k = t index.
  auto n_range = [&](long long ti) {
    const long long b = base + ti;
    const long long lo = b >= 0 ? -(b / P) : (-b + P - 1) / P;
    const long long hi = (size - 1 - b) >= 0 ? (size - 1 - b) / P : -((b - size + 1 + P - 1) / P);
    return std::pair<long long, long long>{lo, hi};
  };

  parallel_chunks(static_cast<std::size_t>(nt), default_threads(),
                  [&](std::size_t begin, std::size_t end, unsigned) {
                    for (std::size_t i = begin; i < end; ++i) {
                      const long long ti = tidx[i];
                      const auto [nlo, nhi] = n_range(ti);
                      for (Eigen::Index xi = 0; xi < nx; ++xi) {
                        const double x = out.x.at(static_cast<std::size_t>(xi));
                        const double xn0 = lattice.offset;
                        const auto a = std::max<long long>(
                            nlo, static_cast<long long>(std::ceil((x - radius - xn0) / T)));
                        const auto b = std::min<long long>(
                            nhi, static_cast<long long>(std::floor((x + radius - xn0) / T)));
                        cplx acc = 0.0;
                        for (long long n = a; n <= b; ++n) {
                          const cplx yv = y.samples[static_cast<std::size_t>(base + ti + n * P)];
                          acc += yv * s.value(x - (xn0 + static_cast<double>(n) * T));
                        }
                        rep.recovered.values(static_cast<Eigen::Index>(i), xi) = T * acc;
                      }
                    }
                  });

  if (out.nnu > 0) {
    GriddedArray eta{CMatrix::Zero(nt, static_cast<Eigen::Index>(out.nnu)),
                     {rep.recovered.grid.origin0, tstep, out.nu0, out.dnu}};
    parallel_chunks(static_cast<std::size_t>(nt), default_threads(),
                    [&](std::size_t begin, std::size_t end, unsigned) {
                      for (std::size_t i = begin; i < end; ++i) {
                        const long long ti = tidx[i];
                        const double t = static_cast<double>(ti) * y.dt;
                        const auto [nlo, nhi] = n_range(ti);
                        for (std::size_t q = 0; q < out.nnu; ++q) {
                          const double nu = out.nu0 + static_cast<double>(q) * out.dnu;
                          const double sh = s.spectrum(nu);
                          if (sh == 0.0) continue;
                          cplx acc = 0.0;
                          for (long long n = nlo; n <= nhi; ++n) {
                            const double xn = lattice.offset + static_cast<double>(n) * T;
                            acc += y.samples[static_cast<std::size_t>(base + ti + n * P)] * cis2pi(-nu * xn);
                          }
                          eta.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(q)) =
                              T * sh * cis2pi(-nu * t) * acc;
                        }
                      }
                    });
    rep.eta = std::move(eta);
  }

  rep.per_cell_condition = {1.0};
  rep.residual = 0.0;
  rep.rel_l2_error = std::numeric_limits<double>::quiet_NaN();
  rep.settings = {{"engine", "lattice"},
                  {"period", T},
                  {"offset", lattice.offset},
                  {"A", {A.lo, A.hi}},
                  {"B", {B.lo, B.hi}},
                  {"window", window_kind(s)},
                  {"transition", s.transition()},
                  {"t_stride", out.t_stride},
                  {"radius", radius}};
  if (truth != nullptr) {
    CMatrix ref(nt, nx);
    for (Eigen::Index i = 0; i < nt; ++i) {
      const double t = static_cast<double>(tidx[static_cast<std::size_t>(i)]) * y.dt;
      for (Eigen::Index xi = 0; xi < nx; ++xi) {
        ref(i, xi) = impulse_response(*truth, out.x.at(static_cast<std::size_t>(xi)) + t, t);
      }
    }
    rep.rel_l2_error = rel_l2(rep.recovered.values, ref);
    if (rep.eta) {
      CMatrix eref(nt, static_cast<Eigen::Index>(out.nnu));
      for (Eigen::Index i = 0; i < nt; ++i) {
        for (Eigen::Index q = 0; q < eref.cols(); ++q) {
          eref(i, q) = eval_spreading(*truth, rep.eta->grid.origin0 + static_cast<double>(i) * tstep,
                                      out.nu0 + static_cast<double>(q) * out.dnu);
        }
      }
      rep.settings["eta_rel_l2"] = rel_l2(rep.eta->values, eref);
    }
  }
  return rep;
}

ReconstructionReport reconstruct_rect(const SampledSignal& y, double T, double omega,
                                      const Window& s, const RectOutput& out,
                                      const GroundTruthOperator* truth) {
  if (!(T > 0.0) || !(omega > 0.0)) throw DomainError("rectangle sampling needs T > 0 and omega > 0");
  if (s.kind() == Window::Kind::kRaisedCosine && !(T * omega < 1.0)) {
    throw DomainError("T * omega must be < 1 with a smooth window");
  }
  if (s.kind() == Window::Kind::kSharp && T * omega > 1.0 + 1e-12) {
    throw DomainError("T * omega must be <= 1");
  }
  return reconstruct_lattice(y, {0.0, T}, {-0.5 * omega, 0.5 * omega}, {T, 0.0}, s, out, truth);
}

CVector UnmixingSystem::solve(std::span<const cplx> z) const {
  if (static_cast<Eigen::Index>(z.size()) != pseudo_inverse.cols()) {
    throw SizeMismatchError("observation length must equal L");
  }
  const Eigen::Map<const Eigen::VectorXcd> zv(z.data(), static_cast<Eigen::Index>(z.size()));
  const Eigen::VectorXcd u = pseudo_inverse * zv;
  return CVector(u.data(), u.data() + u.size());
}

UnmixingSystem build_unmixing(const CellCover& cover, std::span<const cplx> c, double cond_cap) {
  if (static_cast<int>(c.size()) != cover.L) {
    throw SizeMismatchError("identifier length must equal the cover's L");
  }
  if (cover.cells.size() > static_cast<std::size_t>(cover.L)) {
    throw DomainError("cover has more cells than L");
  }
  UnmixingSystem sys;
  sys.L = cover.L;
  sys.K = cover.K;
  std::vector<Cell> cells;
  for (const auto& [m, n] : cover.cells) cells.push_back({m, n});
  sys.cells = CellPattern(std::move(cells));
  sys.matrix = pattern_matrix(c, sys.cells);
  sys.condition = condition_number(sys.matrix);
  if (!(sys.condition <= cond_cap)) {
    throw SingularSystemError("unmixing system is ill-conditioned; try another identifier",
                              sys.condition);
  }
  const Eigen::JacobiSVD<CMatrix> svd(sys.matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Eigen::VectorXd inv = sv.cwiseInverse();
  sys.pseudo_inverse = svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
  const double opnorm = sv.size() > 0 ? sv(0) : 0.0;
  for (Eigen::Index j = 0; j < sys.pseudo_inverse.rows(); ++j) {
    sys.per_cell_condition.push_back(sys.pseudo_inverse.row(j).norm() * opnorm);
  }
  return sys;
}

ReconstructionReport reconstruct_multicell(const SampledSignal& y, const CellCover& cover,
                                           std::span<const cplx> c, const MulticellOutput& out,
                                           const GroundTruthOperator* truth) {
  const UnmixingSystem sys = build_unmixing(cover, c, out.cond_cap);
  const int K = cover.K;
  const int L = cover.L;
  if (out.t_stride < 1 || out.nnu < 1) throw DomainError("output grid needs t_stride, nnu >= 1");
  if (y.size() == 0) throw DomainError("empty response");
  const long long P = exact_multiple(1.0 / K, y.dt, "1/K is not a multiple of the sample step");
  if (P % out.t_stride != 0) throw DomainError("t_stride must divide the samples per 1/K");
  const long long base = exact_multiple(-y.t0, y.dt, "sample grid is not aligned with time 0");
  const long long ntc = P / out.t_stride;  // t samples per cell width
  const auto nnu = static_cast<long long>(out.nnu);
  const double height = static_cast<double>(K) / L;
  const double dnu = height / static_cast<double>(nnu);
  const double tstep = static_cast<double>(out.t_stride) * y.dt;
  const auto size = static_cast<long long>(y.size());
  const auto ncell = static_cast<Eigen::Index>(sys.cells.size());

  ReconstructionReport rep;
  rep.quantity = "eta";
  rep.recovered.values = CMatrix::Zero(K * ntc, L * nnu);
  rep.recovered.grid = {0.0, tstep, 0.0, dnu};
  rep.truncation_radius = out.radius;
  std::vector<double> resid_num(static_cast<std::size_t>(ntc), 0.0);
  std::vector<double> resid_den(static_cast<std::size_t>(ntc), 0.0);

  parallel_chunks(static_cast<std::size_t>(ntc), default_threads(),
                  [&](std::size_t begin, std::size_t end, unsigned) {
    Eigen::MatrixXcd Z(L, nnu);
    for (std::size_t i = begin; i < end; ++i) {
      const long long ti = static_cast<long long>(i) * out.t_stride;  // index offset of t
      const double t = static_cast<double>(ti) * y.dt;
      Z.setZero();
      for (int j = 0; j < L; ++j) {
        // Positions t + (mL + j)/K have sample index base + ti + (mL + j) P.
        const long long b = base + ti + static_cast<long long>(j) * P;
        const long long stride = static_cast<long long>(L) * P;
        long long mlo = b >= 0 ? -(b / stride) : (-b + stride - 1) / stride;
        long long mhi = (size - 1 - b) >= 0 ? (size - 1 - b) / stride
                                             : -((b - size + 1 + stride - 1) / stride);
        if (out.radius > 0.0) {
          const double span = static_cast<double>(L) / K;
          const double off = static_cast<double>(j) / K;
          mlo = std::max(mlo, static_cast<long long>(std::ceil((-out.radius - off) / span)));
          mhi = std::min(mhi, static_cast<long long>(std::floor((out.radius - off) / span)));
        }
        for (long long m = mlo; m <= mhi; ++m) {
          const cplx v = y.samples[static_cast<std::size_t>(b + m * stride)];
          if (v == cplx(0.0)) continue;
          const double pos = t + static_cast<double>(m * L + j) / K;
          for (long long q = 0; q < nnu; ++q) {
            Z(j, q) += v * cis2pi(-static_cast<double>(q) * dnu * pos);
          }
        }
      }
      const CMatrix U = sys.pseudo_inverse * Z;
      resid_num[i] = (sys.matrix * U - Z).squaredNorm();
      resid_den[i] = Z.squaredNorm();
      for (Eigen::Index cidx = 0; cidx < ncell; ++cidx) {
        const Cell& cell = sys.cells.cells[static_cast<std::size_t>(cidx)];
        const cplx unphase =
            (static_cast<double>(L) / K) * cis2pi(-static_cast<double>(cell.l) * K * t / L);
        for (long long q = 0; q < nnu; ++q) {
          rep.recovered.values(cell.k * ntc + static_cast<long long>(i), cell.l * nnu + q) =
              unphase * U(cidx, q);
        }
      }
    }
  });

  const double num = std::accumulate(resid_num.begin(), resid_num.end(), 0.0);
  const double den = std::accumulate(resid_den.begin(), resid_den.end(), 0.0);
  rep.residual = den > 0.0 ? std::sqrt(num / den) : 0.0;
  rep.per_cell_condition = sys.per_cell_condition;
  rep.rel_l2_error = std::numeric_limits<double>::quiet_NaN();
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& [m, n] : cover.cells) cells.push_back({m, n});
  rep.settings = {{"engine", "multicell"},
                  {"K", K},
                  {"L", L},
                  {"eps", cover.eps.to_string()},
                  {"cells", cells},
                  {"t_stride", out.t_stride},
                  {"nnu", out.nnu},
                  {"radius", out.radius},
                  {"cond_cap", out.cond_cap},
                  {"condition", sys.condition}};
  if (truth != nullptr) {
    const auto& v = rep.recovered.values;
    CMatrix ref(v.rows(), v.cols());
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
      for (Eigen::Index q = 0; q < v.cols(); ++q) {
        ref(r, q) = eval_spreading(*truth, static_cast<double>(r) * tstep, static_cast<double>(q) * dnu);
      }
    }
    rep.rel_l2_error = rel_l2(v, ref);
  }
  return rep;
}

SampledSignal identify_function(const SampledSignal& samples, double T, double omega,
                                const Window& s, const Grid1D& out, double radius) {
  if (!(T > 0.0) || !(omega > 0.0)) throw DomainError("sampling needs T > 0 and omega > 0");
  if (s.kind() == Window::Kind::kRaisedCosine && !(T * omega < 1.0)) {
    throw DomainError("T * omega must be < 1 with a smooth window");
  }
  if (s.kind() == Window::Kind::kSharp && T * omega > 1.0 + 1e-12) {
    throw DomainError("T * omega must be <= 1");
  }
  if (std::abs(samples.dt - T) > 1e-12 * T) throw DomainError("samples must be spaced by T");
  const long long k0 = exact_multiple(samples.t0, T, "samples must start on the lattice T Z");
  const double r = radius > 0.0 ? radius : s.decay_radius();
  CVector values(out.n);
  const auto n = static_cast<long long>(samples.size());
  parallel_chunks(out.n, default_threads(), [&](std::size_t begin, std::size_t end, unsigned) {
    for (std::size_t i = begin; i < end; ++i) {
      const double x = out.at(i);
      const auto lo = std::max<long long>(0, static_cast<long long>(std::ceil((x - r) / T)) - k0);
      const auto hi = std::min<long long>(n - 1, static_cast<long long>(std::floor((x + r) / T)) - k0);
      cplx acc = 0.0;
      for (long long k = lo; k <= hi; ++k) {
        acc += samples.samples[static_cast<std::size_t>(k)] *
               s.value(x - static_cast<double>(k + k0) * T);
      }
      values[i] = T * acc;
    }
  });
  return SampledSignal(out.t0, out.dt, std::move(values));
}

SampledSignal identify_convolution(const SampledSignal& y) { return y; }

std::vector<SweepRow> conditioning_sweep(int L, std::span<const cplx> c,
                                         const std::vector<int>& area_cells, int trials,
                                         std::uint64_t seed) {
  if (static_cast<int>(c.size()) != L) throw SizeMismatchError("identifier length must equal L");
  if (trials < 0) throw DomainError("trials must be non-negative");
  for (int a : area_cells) {
    if (a < 1) throw DomainError("areaCells entries must be >= 1");
  }
  const int n = L * L;
  std::vector<std::vector<Cell>> perms(static_cast<std::size_t>(trials));
  for (int tr = 0; tr < trials; ++tr) {
    RandomStream rs(seed, static_cast<std::uint64_t>(tr));
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i + 1 < n; ++i) {
      const auto j = i + static_cast<int>(rs.below(static_cast<std::uint64_t>(n - i)));
      std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    for (int v : idx) perms[static_cast<std::size_t>(tr)].push_back({v % L, v / L});
  }
  std::vector<SweepRow> rows;
  for (int a : area_cells) {
    for (int tr = 0; tr < trials; ++tr) {
      SweepRow row{a, tr, 0.0, a > L};
      if (!row.flagged) {
        const auto& p = perms[static_cast<std::size_t>(tr)];
        const CellPattern pat(std::vector<Cell>(p.begin(), p.begin() + a));
        row.sigma_min = min_singular_value(pattern_matrix(c, pat));
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "areaCells,trial,sigma_min,flagged\n";
  char buf[64];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g", r.sigma_min);
    os << r.area_cells << ',' << r.trial << ',' << buf << ',' << (r.flagged ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace opws
