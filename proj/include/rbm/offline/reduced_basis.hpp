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


#ifndef RBM_OFFLINE_REDUCED_BASIS_HPP
#define RBM_OFFLINE_REDUCED_BASIS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rbm/core/affine.hpp"
#include "rbm/core/errors.hpp"
#include "rbm/core/parameter.hpp"
#include "rbm/core/sparse.hpp"

namespace rbm {

/// One truth solve of the greedy loop.
struct SampleRecord {
  ParameterPoint mu;
  int m = 0;
  double lambda = 0.0;
  /// Basis columns contributed after compression.
  Index added = 0;
};

/// Reduced blocks o_r = B^T O_r B of one affine observable.
struct ReducedObservable {
  std::string name;
  ObservableCoefficients alpha;
  std::vector<Matrix> blocks;

  std::size_t num_outputs() const { return alpha.num_outputs(); }
};

/// The trained surrogate {B, b, h_q, h_qq'} plus sample history and reduced
/// observables. Everything except `basis` is independent of the Hilbert
/// dimension.
struct ReducedBasisModel {
  CoefficientMap theta;
  Index truth_dim = 0;
  /// B; may be empty when the model was stored without it.
  Matrix basis;
  Matrix gram;
  std::vector<Matrix> h;
  /// h_qq' at index q * Q + q'.
  std::vector<Matrix> hh;
  /// Upper-trapezoidal factor of W = [H_1 b_1 .. H_Q b_1, b_1, H_1 b_2, ...]
  /// so that ||(H(mu) - lambda) B phi|| = ||resid_r c|| without cancellation.
  Matrix resid_r;
  /// Rows of resid_r in use after each basis column.
  std::vector<Index> resid_rows;
  std::vector<SampleRecord> samples;
  /// Max residual over the training grid after each greedy iteration.
  std::vector<double> history;
  /// Basis size after each greedy iteration.
  std::vector<Index> history_size;
  std::vector<ReducedObservable> observables;

  Index size() const { return gram.rows(); }
  std::size_t num_terms() const { return h.size(); }
  bool empty() const { return size() == 0; }
  bool has_basis() const { return basis.cols() == size() && basis.rows() > 0; }

  const Matrix &hh_block(std::size_t q, std::size_t qp) const {
    return hh[q * num_terms() + qp];
  }

  const ReducedObservable &observable(const std::string &name) const {
    for (const auto &o : observables) {
      if (o.name == name) return o;
    }
    throw StateError("reduced blocks for observable '" + name +
                     "' are missing; run the observable precompute step");
  }

  /// The nested model spanned by the leading `n` basis columns.
  ReducedBasisModel Truncated(Index n) const {
    if (n < 0 || n > size()) throw StructuralError("truncation size out of range");
    ReducedBasisModel t;
    t.theta = theta;
    t.truth_dim = truth_dim;
    if (has_basis()) t.basis = basis.leftCols(n);
    t.gram = gram.topLeftCorner(n, n);
    for (const auto &x : h) t.h.push_back(x.topLeftCorner(n, n));
    for (const auto &x : hh) t.hh.push_back(x.topLeftCorner(n, n));
    const Index q1 = static_cast<Index>(num_terms()) + 1;
    if (n > 0 && static_cast<Index>(resid_rows.size()) >= n) {
      const Index rows = resid_rows[static_cast<std::size_t>(n - 1)];
      t.resid_r = resid_r.topLeftCorner(rows, n * q1);
      t.resid_rows.assign(resid_rows.begin(), resid_rows.begin() + n);
    }
    Index acc = 0;
    for (const auto &s : samples) {
      if (acc >= n) break;
      SampleRecord r = s;
      r.added = std::min(s.added, n - acc);
      acc += r.added;
      t.samples.push_back(r);
    }
    for (std::size_t i = 0; i < history.size() && i < history_size.size(); ++i) {
      if (history_size[i] > n) break;
      t.history.push_back(history[i]);
      t.history_size.push_back(history_size[i]);
    }
    for (const auto &o : observables) {
      ReducedObservable r{o.name, o.alpha, {}};
      for (const auto &b : o.blocks) r.blocks.push_back(b.topLeftCorner(n, n));
      t.observables.push_back(std::move(r));
    }
    return t;
  }
};

}  // namespace rbm

#endif  // RBM_OFFLINE_REDUCED_BASIS_HPP
