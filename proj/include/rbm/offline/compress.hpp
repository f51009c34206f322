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


#ifndef RBM_OFFLINE_COMPRESS_HPP
#define RBM_OFFLINE_COMPRESS_HPP

#include <Eigen/Dense>

#include "rbm/core/errors.hpp"
#include "rbm/core/sparse.hpp"
#include "rbm/offline/reduced_basis.hpp"
#include "rbm/online/reduced_ground.hpp"

namespace rbm {

/// x - B b^-1 B^T x.
inline Matrix ProjectOutBasis(const Matrix &x, const Matrix &basis, const Matrix &gram) {
  if (basis.cols() == 0) return x;
  Matrix c = basis.transpose() * x;
  if (!detail::IsIdentity(gram)) c = gram.llt().solve(c);
  return x - basis * c;
}

/// New orthonormal directions contributed by the snapshot block `snapshots`:
/// left singular vectors of its component orthogonal to span(B) whose
/// singular value exceeds `tol`. May return zero columns.
inline Matrix Compress(const Matrix &snapshots, const Matrix &basis, const Matrix &gram,
                       double tol) {
  if (basis.cols() > 0 && basis.rows() != snapshots.rows()) {
    throw StructuralError("snapshot block and basis have different row counts");
  }
  if (gram.rows() != basis.cols()) throw StructuralError("Gram matrix does not match basis");
  Matrix r = ProjectOutBasis(snapshots, basis, gram);
  r = ProjectOutBasis(r, basis, gram);
  Eigen::BDCSVD<Matrix> svd(r, Eigen::ComputeThinU);
  Index keep = 0;
  while (keep < svd.singularValues().size() && svd.singularValues()[keep] > tol) ++keep;
  if (keep == 0) return Matrix(snapshots.rows(), 0);

  Matrix u = svd.matrixU().leftCols(keep);
  u = ProjectOutBasis(u, basis, gram);
  Eigen::HouseholderQR<Matrix> qr(u);
  Matrix q = qr.householderQ() * Matrix::Identity(u.rows(), keep);
  // Fix the column signs so that q matches u up to rounding.
  for (Index j = 0; j < keep; ++j) {
    if (q.col(j).dot(u.col(j)) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

}  // namespace rbm

#endif  // RBM_OFFLINE_COMPRESS_HPP
