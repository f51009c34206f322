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


#ifndef RBM_OFFLINE_RESIDUAL_HPP
#define RBM_OFFLINE_RESIDUAL_HPP

#include <cmath>
#include <string>
#include <vector>

#include "rbm/core/errors.hpp"
#include "rbm/offline/reduced_basis.hpp"
#include "rbm/online/reduced_ground.hpp"

namespace rbm {

enum class ResidualMethod {
  /// ||R c|| with R the triangular factor of [H_q b_j, b_j]; no cancellation.
  kFactored,
  /// The expanded quadratic form with h_qq' and b; loses accuracy once the
  /// residual drops below about sqrt(eps) |lambda|.
  kGram,
};

inline std::string ToString(ResidualMethod m) {
  return m == ResidualMethod::kFactored ? "factored" : "gram";
}

/// sqrt( sum_i [ sum_qq' theta_q theta_q' phi_i^T h_qq' phi_i - lambda^2 phi_i^T b phi_i ] ).
inline double ResidualGram(const ReducedBasisModel &rbm, const std::vector<double> &theta,
                           const Matrix &phi, double lambda) {
  const std::size_t nq = rbm.num_terms();
  double quad = 0.0, amp = 0.0;
  for (std::size_t q = 0; q < nq; ++q) {
    for (std::size_t qp = 0; qp < nq; ++qp) {
      quad += theta[q] * theta[qp] *
              (phi.array() * (rbm.hh_block(q, qp) * phi).array()).sum();
    }
    amp += std::abs(theta[q]) * std::sqrt(std::max(rbm.hh_block(q, q).trace(), 0.0));
  }
  const double norm = (phi.array() * (rbm.gram * phi).array()).sum();
  const double s = quad - lambda * lambda * norm;
  // Magnitude of the cancelling terms: (sum_q |theta_q| ||H_q B||_F)^2 ||phi||^2.
  const double scale = (amp * amp + lambda * lambda) * phi.squaredNorm();
  if (s < -1e-10 * scale) {
    throw NumericalError("residual quadratic form is negative (" + std::to_string(s) +
                         "); the reduced matrices are inconsistent");
  }
  return std::sqrt(std::max(s, 0.0));
}

/// Same quantity as ResidualGram, evaluated as the norm of R c with
/// c = (theta_1 phi_j, ..., theta_Q phi_j, -lambda phi_j)_j.
inline double ResidualFactored(const ReducedBasisModel &rbm, const std::vector<double> &theta,
                               const Matrix &phi, double lambda) {
  const Index n = rbm.size();
  const Index nq = static_cast<Index>(rbm.num_terms());
  const Index q1 = nq + 1;
  if (rbm.resid_r.cols() != q1 * n || static_cast<Index>(rbm.resid_rows.size()) != n) {
    throw StateError("residual factor is missing or does not match the basis size");
  }
  Matrix c(q1 * n, phi.cols());
  for (Index j = 0; j < n; ++j) {
    for (Index q = 0; q < nq; ++q) c.row(j * q1 + q) = theta[static_cast<std::size_t>(q)] * phi.row(j);
    c.row(j * q1 + nq) = -lambda * phi.row(j);
  }
  const Index rows = rbm.resid_rows.back();
  return (rbm.resid_r.topRows(rows) * c).norm();
}

inline bool HasResidualFactor(const ReducedBasisModel &rbm) {
  return rbm.resid_r.cols() == static_cast<Index>(rbm.num_terms() + 1) * rbm.size() &&
         static_cast<Index>(rbm.resid_rows.size()) == rbm.size() && rbm.size() > 0;
}

/// Res_n(mu) for the reduced solution `sol`. Falls back to the Gram form
/// when the model carries no residual factor.
inline double Residual(const ReducedBasisModel &rbm, const ReducedSolution &sol,
                       ResidualMethod method = ResidualMethod::kFactored) {
  const auto theta = rbm.theta(sol.mu);
  if (method == ResidualMethod::kFactored && HasResidualFactor(rbm)) {
    return ResidualFactored(rbm, theta, sol.phi, sol.lambda_rb);
  }
  return ResidualGram(rbm, theta, sol.phi, sol.lambda_rb);
}

}  // namespace rbm

#endif  // RBM_OFFLINE_RESIDUAL_HPP
