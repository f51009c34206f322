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

#ifndef RBM_CORE_SPARSE_HPP
#define RBM_CORE_SPARSE_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "rbm/core/errors.hpp"

namespace rbm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Column-compressed real sparse matrix, not necessarily symmetric.
using RealSparse = Eigen::SparseMatrix<double, Eigen::ColMajor>;
using Triplet = Eigen::Triplet<double>;

/// Real symmetric (hence Hermitian) sparse operator in compressed-column
/// storage. The stored entry set is symmetric bit for bit.
class SparseHermitian {
 public:
  SparseHermitian() = default;

  /// Entries of the upper triangle (row <= col); they are mirrored.
  /// Duplicates are summed.
  static SparseHermitian FromUpper(Index dim, const std::vector<Triplet> &upper) {
    std::vector<Triplet> all;
    all.reserve(2 * upper.size());
    for (const auto &t : upper) {
      if (t.row() > t.col()) {
        throw StructuralError("FromUpper expects entries with row <= col");
      }
      CheckIndex(dim, t);
      all.push_back(t);
      if (t.row() != t.col()) all.emplace_back(t.col(), t.row(), t.value());
    }
    return FromSymmetricTriplets(dim, all);
  }

  /// General triplets; duplicates are summed and the result must be symmetric
  /// to within `tol` (relative to the largest entry). The stored matrix is the
  /// exact symmetric part.
  static SparseHermitian FromTriplets(Index dim, const std::vector<Triplet> &triplets,
                                      double tol = 0.0) {
    for (const auto &t : triplets) CheckIndex(dim, t);
    RealSparse a(dim, dim);
    a.setFromTriplets(triplets.begin(), triplets.end());
    return FromMatrix(a, tol);
  }

  static SparseHermitian FromMatrix(const RealSparse &a, double tol = 0.0) {
    if (a.rows() != a.cols()) throw StructuralError("operator must be square");
    RealSparse at = a.transpose();
    RealSparse diff = a - at;
    double scale = 0.0, asym = 0.0;
    for (Index k = 0; k < a.outerSize(); ++k) {
      for (RealSparse::InnerIterator it(a, k); it; ++it) {
        scale = std::max(scale, std::abs(it.value()));
      }
    }
    for (Index k = 0; k < diff.outerSize(); ++k) {
      for (RealSparse::InnerIterator it(diff, k); it; ++it) {
        asym = std::max(asym, std::abs(it.value()));
      }
    }
    if (asym > tol * scale) {
      throw StructuralError("operator is not Hermitian (max |A - A^T| = " +
                            std::to_string(asym) + ")");
    }
    SparseHermitian h;
    RealSparse sym = 0.5 * (a + at);
    sym.prune(0.0);
    sym.makeCompressed();
    h.matrix_ = std::make_shared<const RealSparse>(std::move(sym));
    return h;
  }

  static SparseHermitian Identity(Index dim) {
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(dim));
    for (Index i = 0; i < dim; ++i) t.emplace_back(i, i, 1.0);
    return FromUpper(dim, t);
  }

  static SparseHermitian Diagonal(const Vector &d) {
    std::vector<Triplet> t;
    for (Index i = 0; i < d.size(); ++i) {
      if (d[i] != 0.0) t.emplace_back(i, i, d[i]);
    }
    return FromUpper(d.size(), t);
  }

  Index dim() const { return matrix_ ? matrix_->rows() : 0; }
  Index nnz() const { return matrix_ ? matrix_->nonZeros() : 0; }
  bool empty() const { return dim() == 0; }
  const RealSparse &matrix() const { return *matrix_; }

  Vector Apply(const Vector &v) const {
    if (v.size() != dim()) {
      throw StructuralError("vector length " + std::to_string(v.size()) +
                            " does not match operator dimension " +
                            std::to_string(dim()));
    }
    return (*matrix_) * v;
  }

  /// Blocked application to the columns of `x`.
  Matrix Apply(const Matrix &x) const {
    if (x.rows() != dim()) {
      throw StructuralError("block has " + std::to_string(x.rows()) +
                            " rows, operator dimension is " + std::to_string(dim()));
    }
    return (*matrix_) * x;
  }

  Vector Diagonal() const { return matrix_->diagonal(); }

  Matrix ToDense() const { return Matrix(*matrix_); }

  /// Largest |A_ij - A_ji| over the stored entries (zero by construction).
  double HermiticityDefect() const {
    RealSparse d = (*matrix_) - RealSparse(matrix_->transpose());
    double m = 0.0;
    for (Index k = 0; k < d.outerSize(); ++k) {
      for (RealSparse::InnerIterator it(d, k); it; ++it) {
        m = std::max(m, std::abs(it.value()));
      }
    }
    return m;
  }

 private:
  static void CheckIndex(Index dim, const Triplet &t) {
    if (t.row() < 0 || t.col() < 0 || t.row() >= dim || t.col() >= dim) {
      throw StructuralError("sparse entry index out of range");
    }
  }

  static SparseHermitian FromSymmetricTriplets(Index dim,
                                               const std::vector<Triplet> &t) {
    RealSparse a(dim, dim);
    a.setFromTriplets(t.begin(), t.end());
    a.prune(0.0);
    a.makeCompressed();
    SparseHermitian h;
    h.matrix_ = std::make_shared<const RealSparse>(std::move(a));
    return h;
  }

  std::shared_ptr<const RealSparse> matrix_;
};

/// Linear combination sum_q c_q A_q of operators sharing one dimension.
inline SparseHermitian Combine(const std::vector<SparseHermitian> &terms,
                               const std::vector<double> &coeffs) {
  if (terms.empty() || terms.size() != coeffs.size()) {
    throw StructuralError("Combine needs one coefficient per term");
  }
  Index dim = terms.front().dim();
  RealSparse acc(dim, dim);
  for (std::size_t q = 0; q < terms.size(); ++q) {
    if (terms[q].dim() != dim) {
      throw StructuralError("operator terms have mismatching dimensions");
    }
    if (coeffs[q] != 0.0) acc += coeffs[q] * terms[q].matrix();
  }
  // a_ij and a_ji accumulate identical products in identical order.
  return SparseHermitian::FromMatrix(acc, 0.0);
}

}  // namespace rbm

#endif  // RBM_CORE_SPARSE_HPP
