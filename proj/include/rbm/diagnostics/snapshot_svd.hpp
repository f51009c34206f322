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


#ifndef RBM_DIAGNOSTICS_SNAPSHOT_SVD_HPP
#define RBM_DIAGNOSTICS_SNAPSHOT_SVD_HPP

#include <string>
#include <vector>

#include <lapacke.h>

#include "rbm/core/errors.hpp"
#include "rbm/core/sparse.hpp"
#include "rbm/diagnostics/truth_sweep.hpp"

namespace rbm {

/// Singular values of A = [Psi(mu_1) | ... | Psi(mu_M)], normalized by the
/// largest. Computed from A itself; the Gram route A^T A cannot resolve
/// ratios below about 1e-8.
inline Vector SnapshotSingularValues(const std::vector<const Matrix *> &blocks) {
  if (blocks.empty()) throw StructuralError("no snapshots");
  Index rows = blocks.front()->rows(), cols = 0;
  for (const Matrix *b : blocks) {
    if (b->rows() != rows) throw StructuralError("snapshot blocks differ in row count");
    cols += b->cols();
  }
  Matrix a(rows, cols);
  Index c = 0;
  for (const Matrix *b : blocks) {
    a.middleCols(c, b->cols()) = *b;
    c += b->cols();
  }
  Vector s(std::min(rows, cols));
  const lapack_int info =
      LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', static_cast<lapack_int>(rows),
                     static_cast<lapack_int>(cols), a.data(), static_cast<lapack_int>(rows),
                     s.data(), nullptr, 1, nullptr, 1);
  if (info != 0) throw NumericalError("snapshot SVD failed (info " + std::to_string(info) + ")");
  if (s.size() > 0 && s[0] > 0.0) s /= s[0];
  return s;
}

inline Vector SnapshotSingularValues(const TruthSweep &sweep) {
  std::vector<const Matrix *> blocks;
  for (const auto &r : sweep.records) blocks.push_back(&r.manifold.states);
  return SnapshotSingularValues(blocks);
}

/// Smallest N with sigma_{N+1} / sigma_1 < tol, i.e. the number of normalized
/// singular values at or above `tol`.
inline Index BasisSizeForTolerance(const Vector &normalized, double tol) {
  Index n = 0;
  while (n < normalized.size() && normalized[n] >= tol) ++n;
  return n;
}

}  // namespace rbm

#endif  // RBM_DIAGNOSTICS_SNAPSHOT_SVD_HPP
