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

#include "opws/gabor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "opws/parallel.hpp"
#include "opws/rng.hpp"

namespace opws {

namespace {

int reduce(long long v, int L) { return static_cast<int>(((v % L) + L) % L); }

double vector_norm(std::span<const cplx> c) {
  double acc = 0.0;
  for (const auto& v : c) acc += std::norm(v);
  return std::sqrt(acc);
}

// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  __extension__ typedef unsigned __int128 u128;
  u128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(acc);
}

// Advances to the next subset in colexicographic order.
void colex_next(std::vector<int>& s, int n) {
  const auto L = s.size();
  for (std::size_t i = 0; i < L; ++i) {
    const int limit = (i + 1 < L) ? s[i + 1] : n;
    if (s[i] + 1 < limit) {
      ++s[i];
      for (std::size_t j = 0; j < i; ++j) s[j] = static_cast<int>(j);
      return;
    }
  }
}

// Subsets related by a time-frequency shift have equal |det| in exact
// arithmetic; dets within this relative gap of the minimum count as tied.
constexpr double kTieGap = 1e-9;

struct Record {
  std::uint64_t index;
  double det;
  std::vector<int> subset;
};

struct SubsetStats {
  double min_abs_det = std::numeric_limits<double>::infinity();
  // Running-minimum records still within kTieGap of the minimum; indices
  // ascend, dets descend.
  std::vector<Record> near;
  double worst_cond = 0.0;

  void prune() {
    const double cut = min_abs_det * (1.0 + kTieGap);
    std::erase_if(near, [cut](const Record& r) { return r.det > cut; });
  }
};

void merge(SubsetStats& into, const SubsetStats& from) {
  into.min_abs_det = std::min(into.min_abs_det, from.min_abs_det);
  into.near.insert(into.near.end(), from.near.begin(), from.near.end());
  into.prune();
  into.worst_cond = std::max(into.worst_cond, from.worst_cond);
}

void score_subset(const CMatrix& G, const std::vector<int>& subset, std::uint64_t index,
                  CMatrix& work, SubsetStats& stats) {
  for (std::size_t j = 0; j < subset.size(); ++j) {
    work.col(static_cast<Eigen::Index>(j)) = G.col(subset[j]);
  }
  const double det = std::abs(work.partialPivLu().determinant());
  // Gram eigenvalues: about 10x cheaper than a complex SVD at these sizes.
  const Eigen::SelfAdjointEigenSolver<CMatrix> es(work.adjoint() * work, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  const double lmax = es.eigenvalues()(es.eigenvalues().size() - 1);
  const double cond = lmin > 0.0 ? std::sqrt(lmax / lmin) : INFINITY;
  if (det < stats.min_abs_det) {
    stats.min_abs_det = det;
    stats.near.push_back({index, det, subset});
    stats.prune();
  }
  stats.worst_cond = std::max(stats.worst_cond, cond);
}

std::vector<int> random_subset(int n, int L, std::uint64_t seed, std::uint64_t index) {
  RandomStream rs(seed, index);
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < L; ++i) {
    const auto j = i + static_cast<int>(rs.below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  std::vector<int> s(pool.begin(), pool.begin() + L);
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

CellPattern::CellPattern(std::vector<Cell> c) : cells(std::move(c)) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (cells[i] == cells[j]) throw DomainError("cell pattern has duplicate cells");
    }
  }
}

CVector tf_shift(std::span<const cplx> c, int k, int l) {
  const int L = static_cast<int>(c.size());
  CVector out(c.size());
  if (L == 0) return out;
  const int lr = reduce(l, L);
  for (int j = 0; j < L; ++j) {
    const int phase = static_cast<int>((static_cast<long long>(j) * lr) % L);
    out[static_cast<std::size_t>(j)] =
        c[static_cast<std::size_t>(reduce(static_cast<long long>(j) - k, L))] *
        cis2pi(static_cast<double>(phase) / L);
  }
  return out;
}

CMatrix gabor_matrix(std::span<const cplx> c) {
  const auto L = static_cast<int>(c.size());
  if (L < 1) throw DomainError("Gabor system needs L >= 1");
  CMatrix G(L, L * L);
  for (int l = 0; l < L; ++l) {
    for (int k = 0; k < L; ++k) {
      const auto col = tf_shift(c, k, l);
      for (int j = 0; j < L; ++j) G(j, l * L + k) = col[static_cast<std::size_t>(j)];
    }
  }
  return G;
}

CMatrix pattern_matrix(std::span<const cplx> c, const CellPattern& pattern) {
  const auto L = static_cast<Eigen::Index>(c.size());
  CMatrix A(L, static_cast<Eigen::Index>(pattern.size()));
  for (std::size_t j = 0; j < pattern.size(); ++j) {
    const auto col = tf_shift(c, pattern.cells[j].k, pattern.cells[j].l);
    for (Eigen::Index i = 0; i < L; ++i) A(i, static_cast<Eigen::Index>(j)) = col[static_cast<std::size_t>(i)];
  }
  return A;
}

std::uint64_t glp_subset_count(int L) {
  if (L < 1) return 0;
  const auto n = static_cast<std::uint64_t>(L) * static_cast<std::uint64_t>(L);
  return binomial(n, static_cast<std::uint64_t>(L));
}

std::vector<int> colex_unrank(std::uint64_t rank, int n, int L) {
  std::vector<int> s(static_cast<std::size_t>(L));
  for (int i = L - 1; i >= 0; --i) {
    // Largest c with C(c, i + 1) <= rank.
    int c = i;
    while (c + 1 < n && binomial(static_cast<std::uint64_t>(c + 1), static_cast<std::uint64_t>(i + 1)) <= rank) ++c;
    rank -= binomial(static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(i + 1));
    s[static_cast<std::size_t>(i)] = c;
  }
  return s;
}

CVector random_unit_vector(int L, std::uint64_t seed, std::uint64_t stream) {
  if (L < 1) throw DomainError("vector length must be positive");
  RandomStream rs(seed, stream);
  CVector c(static_cast<std::size_t>(L));
  for (auto& v : c) v = rs.complex_normal();
  const double nrm = vector_norm(c);
  for (auto& v : c) v /= nrm;
  return c;
}

GlpCertificate check_glp(std::span<const cplx> c, const GlpOptions& opts) {
  const int L = static_cast<int>(c.size());
  if (L < 1) throw DomainError("GLP check needs L >= 1");
  GlpCertificate cert;
  cert.mode = opts.mode;
  cert.L = L;
  cert.tolerance = opts.rel_tolerance * std::pow(vector_norm(c), L);
  if (opts.mode == GlpMode::kNone) return cert;

  const int n = L * L;
  const CMatrix G = gabor_matrix(c);
  std::uint64_t total = 0;
  if (opts.mode == GlpMode::kExhaustive) {
    total = glp_subset_count(L);
    if (total > opts.budget) {
      throw BudgetExceededError("exhaustive GLP check needs " + std::to_string(total) +
                                " subsets, over the budget of " + std::to_string(opts.budget));
    }
  } else {
    total = opts.trials;
  }

  const unsigned threads = opts.threads > 0 ? opts.threads : default_threads();
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::uint64_t>(threads, total));
  std::vector<SubsetStats> partial(workers);
  parallel_chunks(static_cast<std::size_t>(total), static_cast<unsigned>(workers),
                  [&](std::size_t begin, std::size_t end, unsigned w) {
                    SubsetStats& st = partial[w];
                    CMatrix work(L, L);
                    if (opts.mode == GlpMode::kExhaustive) {
                      std::vector<int> s = colex_unrank(begin, n, L);
                      for (std::size_t r = begin; r < end; ++r) {
                        score_subset(G, s, r, work, st);
                        colex_next(s, n);
                      }
                    } else {
                      for (std::size_t r = begin; r < end; ++r) {
                        score_subset(G, random_subset(n, L, opts.seed, r), r, work, st);
                      }
                    }
                  });
  SubsetStats all;
  for (const auto& st : partial) merge(all, st);
  cert.subsets_checked = total;
  cert.min_abs_det = all.min_abs_det;
  cert.worst_cond = all.worst_cond;
  const auto first = std::min_element(all.near.begin(), all.near.end(),
                                      [](const Record& a, const Record& b) { return a.index < b.index; });
  if (first != all.near.end()) cert.argmin = first->subset;
  cert.holds = total > 0 && all.min_abs_det > cert.tolerance;
  return cert;
}

GaborIdentifier search_identifier(int L, const SearchOptions& opts) {
  if (opts.trials < 1) throw DomainError("identifier search needs trials >= 1");
  GaborIdentifier best;
  bool have = false;
  for (int i = 0; i < opts.trials; ++i) {
    CVector c = random_unit_vector(L, opts.seed, static_cast<std::uint64_t>(i));
    GlpCertificate cert = check_glp(c, opts.scoring);
    const double score = opts.objective == IdentifierObjective::kMaximinDet ? cert.min_abs_det
                                                                             : cert.worst_cond;
    const bool better = !have || (opts.objective == IdentifierObjective::kMaximinDet
                                      ? score > best.score
                                      : score < best.score);
    if (better) {
      best = {L, std::move(c), std::move(cert), score, i};
      have = true;
    }
  }
  return best;
}

CVector finite_apply(const CellPattern& pattern, std::span<const cplx> values,
                     std::span<const cplx> c) {
  if (values.size() != pattern.size()) {
    throw SizeMismatchError("one value per pattern cell is required");
  }
  CVector out(c.size(), 0.0);
  for (std::size_t j = 0; j < pattern.size(); ++j) {
    const auto col = tf_shift(c, pattern.cells[j].k, pattern.cells[j].l);
    for (std::size_t i = 0; i < c.size(); ++i) out[i] += values[j] * col[i];
  }
  return out;
}

FiniteSolution finite_identify(std::span<const cplx> y, const CellPattern& pattern,
                               std::span<const cplx> c, double cond_cap) {
  if (y.size() != c.size()) throw SizeMismatchError("response length must equal L");
  if (pattern.size() > c.size()) {
    throw DomainError("pattern has more cells than equations (underdetermined)");
  }
  FiniteSolution out;
  const Eigen::Map<const CMatrix> yv(y.data(), static_cast<Eigen::Index>(y.size()), 1);
  if (pattern.size() == 0) {
    out.residual = yv.norm();
    out.condition = 1.0;
    return out;
  }
  const CMatrix A = pattern_matrix(c, pattern);
  out.condition = condition_number(A);
  if (!(out.condition <= cond_cap)) {
    throw SingularSystemError("pattern submatrix is singular or ill-conditioned for this identifier",
                              out.condition);
  }
  const CMatrix x = A.colPivHouseholderQr().solve(CMatrix(yv));
  out.values.assign(x.data(), x.data() + x.size());
  out.residual = (A * x - yv).norm();
  return out;
}

double condition_number(const CMatrix& m) {
  if (m.size() == 0) return 1.0;
  const Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  if (m.cols() > m.rows()) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

double min_singular_value(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  const Eigen::JacobiSVD<CMatrix> svd(m);
  if (m.cols() > m.rows()) return 0.0;
  return svd.singularValues()(svd.singularValues().size() - 1);
}

}  // namespace opws
