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

#ifndef RBM_TRUTH_LOBPCG_HPP
#define RBM_TRUTH_LOBPCG_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "rbm/core/sparse.hpp"

namespace rbm {

struct LobpcgOptions {
  double tol = 1e-10;
  int max_iter = 1000;
  std::uint64_t seed = 20211124;
  /// Explicit recomputation of A X every this many iterations.
  int refresh_every = 10;
};

struct LobpcgResult {
  Vector values;
  Matrix vectors;
  Vector residuals;
  int iterations = 0;
  bool converged = false;
};

namespace detail {

/// Fills columns [from, cols) of `x` with standard normal entries.
inline void FillRandom(Matrix &x, Index from, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist;
  for (Index j = from; j < x.cols(); ++j) {
    for (Index i = 0; i < x.rows(); ++i) x(i, j) = dist(gen);
  }
}

/// x <- x - q (q^T x), twice; `ax` gets the matching update from `aq`.
inline void ProjectOut(Matrix &x, Matrix *ax, const Matrix &q, const Matrix *aq) {
  if (q.cols() == 0 || x.cols() == 0) return;
  for (int pass = 0; pass < 2; ++pass) {
    Matrix c = q.transpose() * x;
    x.noalias() -= q * c;
    if (ax) ax->noalias() -= (*aq) * c;
  }
}

/// Orthonormalizes the columns of `x` by the SVQB scheme, dropping
/// numerically dependent directions. The same transformation is applied to
/// `ax` when given.
inline void Svqb(Matrix &x, Matrix *ax, double drop = 1e-12) {
  for (int pass = 0; pass < 2 && x.cols() > 0; ++pass) {
    Vector norms = x.colwise().norm();
    std::vector<Index> keep;
    for (Index j = 0; j < x.cols(); ++j) {
      if (norms[j] > 0.0 && std::isfinite(norms[j])) keep.push_back(j);
    }
    if (static_cast<Index>(keep.size()) != x.cols()) {
      x = Matrix(x(Eigen::all, keep));
      if (ax) *ax = Matrix((*ax)(Eigen::all, keep));
      norms = Vector(norms(keep));
      if (x.cols() == 0) return;
    }
    Vector dinv = norms.cwiseInverse();
    Matrix g = dinv.asDiagonal() * (x.transpose() * x) * dinv.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (g + g.transpose()));
    const Vector &theta = es.eigenvalues();
    const double tmax = theta.maxCoeff();
    std::vector<Index> cols;
    for (Index j = 0; j < theta.size(); ++j) {
      if (theta[j] > drop * tmax) cols.push_back(j);
    }
    Matrix t = dinv.asDiagonal() * es.eigenvectors()(Eigen::all, cols);
    for (Index j = 0; j < t.cols(); ++j) t.col(j) /= std::sqrt(theta[cols[static_cast<std::size_t>(j)]]);
    x = x * t;
    if (ax) *ax = (*ax) * t;
  }
}

}  // namespace detail

/// Locally optimal block preconditioned conjugate gradient iteration for the
/// `nev` smallest eigenpairs of `a`. The block width is `x0.cols()`; columns
/// beyond `nev` act as guard vectors and need not converge. The
/// preconditioner is the shifted diagonal (D - lambda_1 + shift)^-1.
inline LobpcgResult Lobpcg(const SparseHermitian &a, Matrix x0, Index nev,
                           const LobpcgOptions &opt = {}) {
  const Index n = a.dim();
  LobpcgResult out;
  if (x0.rows() != n) throw StructuralError("initial block has wrong number of rows");
  if (nev < 1 || nev > x0.cols()) throw StructuralError("nev must be within block width");

  const Vector diag = a.Diagonal();
  const Index width = x0.cols();

  Matrix x = std::move(x0);
  detail::Svqb(x, nullptr);
  if (x.cols() < width) {
    Matrix extra(n, width - x.cols());
    detail::FillRandom(extra, 0, opt.seed);
    detail::ProjectOut(extra, nullptr, x, nullptr);
    detail::Svqb(extra, nullptr);
    Matrix merged(n, x.cols() + extra.cols());
    merged << x, extra;
    x = std::move(merged);
  }
  const Index k = x.cols();
  if (k < nev) throw SolverError("could not build an initial block of full rank");

  Matrix ax = a.Apply(x);
  Vector lambda;
  auto rayleigh_ritz = [&]() {
    Matrix g = x.transpose() * ax;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (g + g.transpose()));
    x = x * es.eigenvectors();
    ax = ax * es.eigenvectors();
    lambda = es.eigenvalues();
  };
  rayleigh_ritz();

  Matrix p(n, 0), ap(n, 0);
  Vector res(k);
  int since_refresh = 0;
  auto finished = [&]() { return (res.head(nev).array() <= opt.tol).all(); };

  for (int it = 0;; ++it) {
    Matrix r = ax - x * lambda.asDiagonal();
    res = r.colwise().norm();
    bool done = finished();
    if (done && since_refresh > 0) {
      // Confirm with an explicit product before declaring convergence.
      ax = a.Apply(x);
      since_refresh = 0;
      r = ax - x * lambda.asDiagonal();
      res = r.colwise().norm();
      done = finished();
    }
    if (done) {
      out.converged = true;
      break;
    }
    if (it >= opt.max_iter) break;
    ++out.iterations;

    std::vector<Index> active;
    for (Index j = 0; j < k; ++j) {
      if (res[j] > opt.tol) active.push_back(j);
    }

    const double spread = std::max(lambda[k - 1] - lambda[0], 0.0);
    const double shift = 1e-2 * (1.0 + std::abs(lambda[0])) + 0.1 * spread;
    Matrix w(n, static_cast<Index>(active.size()));
    for (Index c = 0; c < w.cols(); ++c) {
      const Index j = active[static_cast<std::size_t>(c)];
      w.col(c) = r.col(j).array() /
                 ((diag.array() - lambda[0]).max(0.0) + shift);
    }
    if (p.cols() > 0) {
      detail::ProjectOut(p, &ap, x, &ax);
      detail::Svqb(p, &ap);
    }
    detail::ProjectOut(w, nullptr, x, nullptr);
    detail::ProjectOut(w, nullptr, p, nullptr);
    detail::Svqb(w, nullptr);
    // Second sweep against both blocks after the rescaling.
    detail::ProjectOut(w, nullptr, x, nullptr);
    detail::ProjectOut(w, nullptr, p, nullptr);
    detail::Svqb(w, nullptr);
    Matrix aw = a.Apply(w);

    const Index nw = w.cols(), np = p.cols();
    const Index m = k + nw + np;
    Matrix s(n, m), as(n, m);
    s << x, w, p;
    as << ax, aw, ap;
    Matrix g = s.transpose() * as;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (g + g.transpose()));
    Matrix c = es.eigenvectors().leftCols(k);
    lambda = es.eigenvalues().head(k);

    Matrix cwp = c.bottomRows(nw + np);
    p = s.rightCols(nw + np) * cwp;
    ap = as.rightCols(nw + np) * cwp;
    x = s * c;
    ax = as * c;

    if (++since_refresh >= opt.refresh_every) {
      detail::Svqb(x, nullptr);
      if (x.cols() < k) {
        Matrix extra(n, k - x.cols());
        detail::FillRandom(extra, 0, opt.seed + static_cast<std::uint64_t>(it) + 1);
        detail::ProjectOut(extra, nullptr, x, nullptr);
        detail::Svqb(extra, nullptr);
        Matrix merged(n, x.cols() + extra.cols());
        merged << x, extra;
        x = std::move(merged);
        p.resize(n, 0);
        ap.resize(n, 0);
      }
      ax = a.Apply(x);
      rayleigh_ritz();
      since_refresh = 0;
    }
  }

  out.values = lambda;
  out.vectors = std::move(x);
  out.residuals = res;
  return out;
}

}  // namespace rbm

#endif  // RBM_TRUTH_LOBPCG_HPP
