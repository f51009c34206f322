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


#ifndef RBM_ONLINE_REDUCED_GROUND_HPP
#define RBM_ONLINE_REDUCED_GROUND_HPP

#include <algorithm>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <lapacke.h>

#include "rbm/core/affine.hpp"
#include "rbm/core/errors.hpp"
#include "rbm/offline/reduced_basis.hpp"
#include "rbm/truth/ground_state.hpp"

namespace rbm {

struct ReducedSolution {
  ParameterPoint mu;
  double lambda_rb = 0.0;
  /// N x m coefficient block, b-orthonormal.
  Matrix phi;
  int m = 0;
  /// Distance to the first reduced eigenvalue above the cluster.
  double gap = std::numeric_limits<double>::infinity();
};

namespace detail {

/// Lowest `count` eigenpairs of the symmetric matrix `c` (upper triangle
/// referenced), ascending.
inline void LowestEigenpairs(Matrix c, Index count, Vector &values, Matrix &vectors) {
  const lapack_int n = static_cast<lapack_int>(c.rows());
  const lapack_int iu = static_cast<lapack_int>(count);
  values.resize(n);
  vectors.resize(n, count);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(count));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsyevr(
      LAPACK_COL_MAJOR, 'V', 'I', 'U', n, c.data(), n, 0.0, 0.0, 1, iu,
      LAPACKE_dlamch('S'), &found, values.data(), vectors.data(), n, support.data());
  if (info != 0 || found != iu) {
    throw NumericalError("reduced eigensolver failed (info " + std::to_string(info) + ")");
  }
  values.conservativeResize(count);
}

inline bool IsIdentity(const Matrix &b, double tol = 1e-12) {
  return (b - Matrix::Identity(b.rows(), b.cols())).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace detail

/// h(mu) = sum_q theta_q(mu) h_q.
inline Matrix AssembleReduced(const ReducedBasisModel &rbm, const std::vector<double> &theta) {
  Matrix h = Matrix::Zero(rbm.size(), rbm.size());
  for (std::size_t q = 0; q < rbm.num_terms(); ++q) h += theta[q] * rbm.h[q];
  return h;
}

/// Reduced ground manifold: the cluster of generalized eigenvalues of
/// (h(mu), b) within `tol_degeneracy` of the smallest.
inline ReducedSolution ReducedGround(const ReducedBasisModel &rbm, const ParameterPoint &mu,
                                     double tol_degeneracy = 1e-8) {
  if (rbm.empty()) throw StateError("reduced basis model is empty");
  const Index n = rbm.size();
  Matrix h = AssembleReduced(rbm, rbm.theta(mu));

  const bool orthonormal = detail::IsIdentity(rbm.gram);
  Eigen::LLT<Matrix> llt;
  if (!orthonormal) {
    llt.compute(rbm.gram);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("reduced Gram matrix is not positive definite at " + mu.ToString());
    }
    Matrix l = llt.matrixL();
    h = l.triangularView<Eigen::Lower>().solve(h);
    h = l.triangularView<Eigen::Lower>().solve(Matrix(h.transpose()));
  }

  Index count = std::min<Index>(n, 8);
  Vector w;
  Matrix y;
  int m = 0;
  for (;;) {
    detail::LowestEigenpairs(h, count, w, y);
    m = ClusterSize(w, tol_degeneracy);
    if (m < count || count == n) break;
    count = std::min(n, 2 * count);
  }

  ReducedSolution s;
  s.mu = mu;
  s.lambda_rb = w[0];
  s.m = m;
  if (m < w.size()) s.gap = w[m] - w[0];
  s.phi = y.leftCols(m);
  if (!orthonormal) s.phi = llt.matrixU().solve(s.phi);
  return s;
}

/// Full-space Ritz vectors B phi.
inline Matrix Lift(const ReducedBasisModel &rbm, const ReducedSolution &sol) {
  if (!rbm.has_basis()) {
    throw StateError("the model was stored without its basis; lifting needs B");
  }
  return rbm.basis * sol.phi;
}

/// (1/m) sum_i phi_i^T o_r phi_i for every reduced term.
inline std::vector<double> ReducedTermValues(const ReducedObservable &obs, const Matrix &phi) {
  std::vector<double> t(obs.blocks.size());
  const double m = static_cast<double>(phi.cols());
  for (std::size_t r = 0; r < t.size(); ++r) {
    t[r] = (phi.array() * (obs.blocks[r] * phi).array()).sum() / m;
  }
  return t;
}

/// Surrogate value of every output p of the observable.
inline std::vector<Complex> ObservableEval(const ReducedObservable &obs,
                                           const ReducedSolution &sol) {
  if (obs.blocks.size() != obs.alpha.num_terms()) {
    throw StateError("reduced blocks for '" + obs.name + "' are incomplete");
  }
  if (!obs.blocks.empty() && obs.blocks.front().rows() != sol.phi.rows()) {
    throw StateError("reduced blocks for '" + obs.name + "' do not match the basis size");
  }
  const auto t = ReducedTermValues(obs, sol.phi);
  std::vector<Complex> out(obs.num_outputs());
  for (std::size_t p = 0; p < out.size(); ++p) {
    const auto a = obs.alpha(sol.mu, p);
    Complex acc = 0.0;
    for (std::size_t r = 0; r < a.size(); ++r) acc += a[r] * t[r];
    out[p] = acc;
  }
  return out;
}

}  // namespace rbm

#endif  // RBM_ONLINE_REDUCED_GROUND_HPP
