// Copyright 2026 The rbm-spin Authors - All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RBM_TRUTH_GROUND_STATE_HPP
#define RBM_TRUTH_GROUND_STATE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rbm/core/errors.hpp"
#include "rbm/core/parameter.hpp"
#include "rbm/core/sparse.hpp"
#include "rbm/truth/lobpcg.hpp"

namespace rbm {

struct TruthOptions {
  double tol_resid = 1e-10;
  double tol_degeneracy = 1e-8;
  int max_iter = 1000;
  Index dense_cap = Index{1} << 14;
  std::uint64_t seed = 20211124;
  /// Problems this small are diagonalized densely right away.
  Index dense_below = 64;
  /// Lower bound on the number of extra block columns carried beside the
  /// k targeted pairs. Wide guards keep near-degenerate clusters from
  /// stalling the iteration.
  Index min_guard = 10;
};

enum class SolveMethod { kIterative, kDense };

struct SolverInfo {
  int iterations = 0;
  int solves = 0;
  bool converged = false;
  SolveMethod method = SolveMethod::kIterative;
  bool fell_back = false;
};

/// Lowest eigenvalue with all m orthonormal eigenvectors, certified by the
/// gap to the next eigenvalue.
struct GroundStateManifold {
  ParameterPoint mu;
  double lambda = 0.0;
  Matrix states;
  int m = 0;
  double gap = std::numeric_limits<double>::infinity();
  SolverInfo info;
};

struct DenseSpectrum {
  Vector values;
  Matrix vectors;
};

/// Number of leading eigenvalues within `tol` of the smallest one.
inline int ClusterSize(const Vector &ascending, double tol) {
  int m = 0;
  while (m < ascending.size() && ascending[m] - ascending[0] <= tol) ++m;
  return m;
}

/// Index sets of the connected components of the sparsity graph of `a`,
/// each sorted ascending. Components are ordered by their smallest index.
inline std::vector<std::vector<Index>> ConnectedBlocks(const RealSparse &a) {
  const Index n = a.rows();
  std::vector<Index> label(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<Index>> blocks;
  std::vector<Index> stack;
  for (Index s = 0; s < n; ++s) {
    if (label[static_cast<std::size_t>(s)] >= 0) continue;
    const Index id = static_cast<Index>(blocks.size());
    blocks.emplace_back();
    label[static_cast<std::size_t>(s)] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      const Index v = stack.back();
      stack.pop_back();
      blocks.back().push_back(v);
      for (RealSparse::InnerIterator it(a, v); it; ++it) {
        const Index u = it.row();
        if (it.value() == 0.0 || label[static_cast<std::size_t>(u)] >= 0) continue;
        label[static_cast<std::size_t>(u)] = id;
        stack.push_back(u);
      }
    }
    std::sort(blocks.back().begin(), blocks.back().end());
  }
  return blocks;
}

/// All eigenpairs in ascending order. Decoupled blocks of `h` are
/// diagonalized separately and the results merged.
inline DenseSpectrum DenseFullSpectrum(const SparseHermitian &h, Index cap) {
  const Index n = h.dim();
  if (n > cap) {
    throw SolverError("dense diagonalization refused: dimension " +
                      std::to_string(n) + " exceeds the dense cap " +
                      std::to_string(cap));
  }
  const Matrix full = h.ToDense();
  DenseSpectrum out{Vector(n), Matrix::Zero(n, n)};
  std::vector<std::pair<double, std::pair<Index, Index>>> order;
  order.reserve(static_cast<std::size_t>(n));
  std::vector<Matrix> vecs;
  const auto blocks = ConnectedBlocks(h.matrix());
  for (const auto &idx : blocks) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(full(idx, idx)));
    if (es.info() != Eigen::Success) throw SolverError("dense eigensolver failed");
    const Index b = static_cast<Index>(vecs.size());
    for (Index j = 0; j < es.eigenvalues().size(); ++j) {
      order.push_back({es.eigenvalues()[j], {b, j}});
    }
    vecs.push_back(es.eigenvectors());
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const auto &l, const auto &r) { return l.first < r.first; });
  for (Index c = 0; c < n; ++c) {
    const auto &[value, where] = order[static_cast<std::size_t>(c)];
    out.values[c] = value;
    const auto &idx = blocks[static_cast<std::size_t>(where.first)];
    const Matrix &v = vecs[static_cast<std::size_t>(where.first)];
    for (std::size_t i = 0; i < idx.size(); ++i) {
      out.vectors(idx[i], c) = v(static_cast<Index>(i), where.second);
    }
  }
  return out;
}

inline GroundStateManifold ManifoldFromSpectrum(const DenseSpectrum &spec,
                                                double tol_degeneracy) {
  GroundStateManifold g;
  g.m = ClusterSize(spec.values, tol_degeneracy);
  g.lambda = spec.values[0];
  g.states = spec.vectors.leftCols(g.m);
  g.gap = g.m < spec.values.size() ? spec.values[g.m] - spec.values[0]
                                   : std::numeric_limits<double>::infinity();
  g.info.method = SolveMethod::kDense;
  g.info.converged = true;
  g.info.solves = 1;
  return g;
}

/// Full dense diagonalization; the manifold is extracted with the same
/// degeneracy clustering as the iterative path.
inline GroundStateManifold DenseFallback(const SparseHermitian &h,
                                         const TruthOptions &opt = {}) {
  return ManifoldFromSpectrum(DenseFullSpectrum(h, opt.dense_cap), opt.tol_degeneracy);
}

inline Index GuardColumns(Index k, Index min_guard = 10) {
  return std::max<Index>(min_guard, (k + 1) / 2);
}

/// Ground manifold of `h`. The number of targeted eigenpairs k starts at
/// max(2, guess width) and grows by 4 until lambda_k - lambda_1 exceeds the
/// degeneracy tolerance. Non-convergence falls back to dense
/// diagonalization when the dimension allows it.
inline GroundStateManifold SolveGroundManifold(const SparseHermitian &h,
                                               const Matrix *guess = nullptr,
                                               const TruthOptions &opt = {},
                                               const ParameterPoint &mu = {}) {
  const Index n = h.dim();
  if (guess && guess->rows() != n) {
    throw StructuralError("initial guess has " + std::to_string(guess->rows()) +
                          " rows, operator dimension is " + std::to_string(n));
  }
  auto dense = [&](SolverInfo info) {
    GroundStateManifold g = DenseFallback(h, opt);
    g.mu = mu;
    g.info.iterations = info.iterations;
    g.info.solves = info.solves + 1;
    g.info.fell_back = info.solves > 0;
    return g;
  };

  Index k = std::max<Index>(2, guess ? guess->cols() : 0);
  if (n <= opt.dense_below || 3 * (k + GuardColumns(k, opt.min_guard)) >= n) return dense({});

  Matrix start;
  if (guess) start = *guess;
  SolverInfo info;
  LobpcgOptions lo;
  lo.tol = opt.tol_resid;
  lo.max_iter = opt.max_iter;

  for (;;) {
    const Index width = std::min(n, k + GuardColumns(k, opt.min_guard));
    if (3 * width >= n) return dense(info);
    Matrix x0(n, width);
    const Index have = std::min(width, start.cols());
    if (have > 0) x0.leftCols(have) = start.leftCols(have);
    lo.seed = opt.seed + static_cast<std::uint64_t>(info.solves);
    detail::FillRandom(x0, have, lo.seed);

    LobpcgResult r = Lobpcg(h, std::move(x0), k, lo);
    info.iterations += r.iterations;
    ++info.solves;
    if (!r.converged) {
      if (n <= opt.dense_cap) return dense(info);
      throw SolverError("iterative ground-state solve did not converge at mu = " +
                        mu.ToString() + " and the dimension exceeds the dense cap");
    }
    if (r.values[k - 1] - r.values[0] > opt.tol_degeneracy) {
      GroundStateManifold g;
      g.mu = mu;
      g.m = ClusterSize(r.values.head(k), opt.tol_degeneracy);
      g.lambda = r.values[0];
      g.states = r.vectors.leftCols(g.m);
      g.gap = r.values[g.m] - r.values[0];
      info.converged = true;
      info.method = SolveMethod::kIterative;
      g.info = info;
      return g;
    }
    k = std::min(n, k + 4);
    start = std::move(r.vectors);
  }
}

}  // namespace rbm

#endif  // RBM_TRUTH_GROUND_STATE_HPP
