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


#ifndef RBM_OFFLINE_EXTEND_HPP
#define RBM_OFFLINE_EXTEND_HPP

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "rbm/core/affine.hpp"
#include "rbm/core/errors.hpp"
#include "rbm/offline/reduced_basis.hpp"

namespace rbm {

/// Full-space products kept between greedy steps so that extensions only
/// compute new blocks.
struct TrainingCache {
  /// H_q B for every term.
  std::vector<Matrix> hb;
  /// Orthonormal columns spanning W = [H_1 b_j, ..., H_Q b_j, b_j]_j.
  Matrix qw;
};

inline ReducedBasisModel EmptyModel(const AffineOperator &op) {
  ReducedBasisModel rbm;
  rbm.theta = op.coefficients();
  rbm.truth_dim = op.dim();
  rbm.basis = Matrix(op.dim(), 0);
  rbm.gram = Matrix(0, 0);
  const std::size_t nq = op.num_terms();
  rbm.h.assign(nq, Matrix(0, 0));
  rbm.hh.assign(nq * nq, Matrix(0, 0));
  rbm.resid_r = Matrix(0, 0);
  return rbm;
}

inline TrainingCache EmptyCache(const AffineOperator &op) {
  return {std::vector<Matrix>(op.num_terms(), Matrix(op.dim(), 0)), Matrix(op.dim(), 0)};
}

namespace detail {

inline void GrowSquare(Matrix &a, Index n) {
  const Index old = a.rows();
  a.conservativeResize(n, n);
  a.bottomRows(n - old).setZero();
  a.rightCols(n - old).setZero();
}

/// Appends column `w` to the orthonormal set `qw` by classical Gram-Schmidt
/// with one reorthogonalization. Returns the coefficients [qw^T w; norm];
/// the norm entry is dropped (and qw left unchanged) when `w` is
/// numerically dependent.
inline Vector AppendOrthonormal(Matrix &qw, Vector w) {
  const double w0 = w.norm();
  Vector r = Vector::Zero(qw.cols());
  for (int pass = 0; pass < 2; ++pass) {
    Vector c = qw.transpose() * w;
    w.noalias() -= qw * c;
    r += c;
  }
  const double nrm = w.norm();
  if (w0 == 0.0 || nrm <= 1e-14 * w0) return r;
  qw.conservativeResize(Eigen::NoChange, qw.cols() + 1);
  qw.col(qw.cols() - 1) = w / nrm;
  Vector out(r.size() + 1);
  out << r, nrm;
  return out;
}

}  // namespace detail

/// Appends the columns of `u` (orthonormal, orthogonal to B) to the model
/// and fills in the border blocks of b, h_q and h_qq', the residual factor,
/// and reduced observable blocks for the observables passed in `obs` (in
/// the same order as rbm.observables).
inline void ExtendReducedMatrices(ReducedBasisModel &rbm, TrainingCache &cache,
                                  const AffineOperator &op, const Matrix &u,
                                  const std::vector<AffineObservable> &obs = {}) {
  const Index k = u.cols();
  if (k == 0) return;
  if (u.rows() != op.dim()) throw StructuralError("new basis block has the wrong row count");
  if (!rbm.has_basis() && rbm.size() > 0) {
    throw StateError("extending a model needs its basis");
  }
  if (!rbm.observables.empty() && obs.size() != rbm.observables.size()) {
    throw StateError("extending reduced observables needs the full observables");
  }
  const std::size_t nq = op.num_terms();
  const Index n0 = rbm.size();
  const Index n1 = n0 + k;
  const Matrix &b = rbm.basis;

  std::vector<Matrix> hu(nq);
  for (std::size_t q = 0; q < nq; ++q) hu[q] = op.term(q).Apply(u);

  // b
  {
    Matrix cross = b.transpose() * u;
    Matrix diag = u.transpose() * u;
    detail::GrowSquare(rbm.gram, n1);
    rbm.gram.topRightCorner(n0, k) = cross;
    rbm.gram.bottomLeftCorner(k, n0) = cross.transpose();
    rbm.gram.bottomRightCorner(k, k) = 0.5 * (diag + diag.transpose());
  }
  // h_q
  for (std::size_t q = 0; q < nq; ++q) {
    Matrix cross = b.transpose() * hu[q];
    Matrix diag = u.transpose() * hu[q];
    detail::GrowSquare(rbm.h[q], n1);
    rbm.h[q].topRightCorner(n0, k) = cross;
    rbm.h[q].bottomLeftCorner(k, n0) = cross.transpose();
    rbm.h[q].bottomRightCorner(k, k) = 0.5 * (diag + diag.transpose());
  }
  // h_qq' for q <= q', mirrored to h_q'q.
  for (std::size_t q = 0; q < nq; ++q) {
    for (std::size_t qp = q; qp < nq; ++qp) {
      Matrix &a = rbm.hh[q * nq + qp];
      Matrix top = cache.hb[q].transpose() * hu[qp];
      Matrix left = hu[q].transpose() * cache.hb[qp];
      Matrix diag = hu[q].transpose() * hu[qp];
      if (q == qp) diag = 0.5 * (diag + diag.transpose());
      detail::GrowSquare(a, n1);
      a.topRightCorner(n0, k) = top;
      a.bottomLeftCorner(k, n0) = left;
      a.bottomRightCorner(k, k) = diag;
      if (q != qp) rbm.hh[qp * nq + q] = a.transpose();
    }
  }
  // Residual factor, one basis column at a time in the order H_1..H_Q, b.
  {
    const Index q1 = static_cast<Index>(nq) + 1;
    for (Index j = 0; j < k; ++j) {
      for (Index q = 0; q < q1; ++q) {
        const Vector w = q < static_cast<Index>(nq) ? Vector(hu[static_cast<std::size_t>(q)].col(j))
                                                    : Vector(u.col(j));
        const Vector r = detail::AppendOrthonormal(cache.qw, w);
        const Index col = rbm.resid_r.cols();
        const Index rows = std::max(rbm.resid_r.rows(), r.size());
        const Index old_rows = rbm.resid_r.rows();
        rbm.resid_r.conservativeResize(rows, col + 1);
        if (rows > old_rows) rbm.resid_r.bottomRows(rows - old_rows).setZero();
        rbm.resid_r.col(col).setZero();
        rbm.resid_r.col(col).head(r.size()) = r;
      }
      rbm.resid_rows.push_back(rbm.resid_r.rows());
    }
  }
  // Observables: o_r border blocks from the factor products.
  for (std::size_t o = 0; o < rbm.observables.size(); ++o) {
    const auto &full = obs[o];
    std::vector<Matrix> fb(full.factors().size()), fu(full.factors().size());
    for (std::size_t f = 0; f < fb.size(); ++f) {
      fb[f] = full.factors()[f] * b;
      fu[f] = full.factors()[f] * u;
    }
    auto &red = rbm.observables[o];
    if (red.blocks.empty() && n0 == 0) red.blocks.assign(full.num_terms(), Matrix(0, 0));
    if (red.blocks.size() != full.num_terms()) {
      throw StateError("reduced blocks for '" + red.name + "' are incomplete");
    }
    for (std::size_t r = 0; r < red.blocks.size(); ++r) {
      Matrix top = Matrix::Zero(n0, k), left = Matrix::Zero(k, n0), diag = Matrix::Zero(k, k);
      for (const auto &p : full.terms()[r]) {
        top += p.sign * fb[p.left].transpose() * fu[p.right];
        left += p.sign * fu[p.left].transpose() * fb[p.right];
        diag += p.sign * fu[p.left].transpose() * fu[p.right];
      }
      detail::GrowSquare(red.blocks[r], n1);
      red.blocks[r].topRightCorner(n0, k) = top;
      red.blocks[r].bottomLeftCorner(k, n0) = left;
      red.blocks[r].bottomRightCorner(k, k) = diag;
    }
  }

  rbm.basis.conservativeResize(u.rows(), n1);
  rbm.basis.rightCols(k) = u;
  for (std::size_t q = 0; q < nq; ++q) {
    cache.hb[q].conservativeResize(u.rows(), n1);
    cache.hb[q].rightCols(k) = hu[q];
  }
}

/// o_r = B^T O_r B for every term of `obs`, formed from the products F B.
inline ReducedObservable PrecomputeObservable(const ReducedBasisModel &rbm,
                                              const AffineObservable &obs) {
  if (!rbm.has_basis()) throw StateError("observable precompute needs the basis");
  if (obs.dim() != rbm.basis.rows()) {
    throw StructuralError("observable dimension differs from the basis");
  }
  std::vector<Matrix> fb(obs.factors().size());
  for (std::size_t f = 0; f < fb.size(); ++f) fb[f] = obs.factors()[f] * rbm.basis;
  ReducedObservable red{obs.name(), obs.coefficients(), {}};
  red.blocks.reserve(obs.num_terms());
  for (std::size_t r = 0; r < obs.num_terms(); ++r) {
    Matrix o = Matrix::Zero(rbm.size(), rbm.size());
    for (const auto &p : obs.terms()[r]) o.noalias() += p.sign * fb[p.left].transpose() * fb[p.right];
    red.blocks.push_back(std::move(o));
  }
  return red;
}

}  // namespace rbm

#endif  // RBM_OFFLINE_EXTEND_HPP
