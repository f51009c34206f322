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


#ifndef RBM_DIAGNOSTICS_ERRORS_HPP
#define RBM_DIAGNOSTICS_ERRORS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "rbm/core/errors.hpp"
#include "rbm/diagnostics/truth_sweep.hpp"
#include "rbm/offline/reduced_basis.hpp"
#include "rbm/offline/residual.hpp"
#include "rbm/online/reduced_ground.hpp"
#include "rbm/online/scan.hpp"

namespace rbm {

/// ||P - P'||_F / ||P||_F for the projectors onto the orthonormal blocks
/// `psi` (truth) and `phi`. Uses ||P - P'||^2 = ||(I - P') psi||^2 +
/// ||(I - P) phi||^2; the shorter m + m' - 2 ||psi^T phi||^2 cancels down to
/// about sqrt(eps).
inline double ProjectorDistance(const Matrix &psi, const Matrix &phi) {
  const double a = (psi - phi * (phi.transpose() * psi)).squaredNorm();
  const double b = (phi - psi * (psi.transpose() * phi)).squaredNorm();
  return std::sqrt(a + b) / std::sqrt(static_cast<double>(psi.cols()));
}

/// |lambda - lambda_rb| / |lambda|; absolute when |lambda| < 1e-14.
inline double EigenvalueError(double lambda, double lambda_rb, bool *absolute = nullptr) {
  const bool abs_mode = std::abs(lambda) < 1e-14;
  if (absolute) *absolute = abs_mode;
  return abs_mode ? std::abs(lambda - lambda_rb) : std::abs(lambda - lambda_rb) / std::abs(lambda);
}

/// ||s - s_rb|| / ||s|| over all outputs; absolute when ||s|| = 0.
inline double ObservableError(const std::vector<Complex> &truth,
                              const std::vector<Complex> &reduced, bool *absolute = nullptr) {
  double diff = 0.0, norm = 0.0;
  for (std::size_t p = 0; p < truth.size(); ++p) {
    diff += std::norm(truth[p] - reduced[p]);
    norm += std::norm(truth[p]);
  }
  const bool abs_mode = norm == 0.0;
  if (absolute) *absolute = abs_mode;
  return abs_mode ? std::sqrt(diff) : std::sqrt(diff / norm);
}

struct PointError {
  ParameterPoint mu;
  double lambda = 0.0;
  double lambda_rb = 0.0;
  int m = 0;
  int m_rb = 0;
  double residual = 0.0;
  double err_val = 0.0;
  double err_vec = std::nan("");
  double err_sf = std::nan("");
  std::string flags;
};

struct ErrorReport {
  Index basis_size = 0;
  double err_val = 0.0, err_vec = 0.0, err_sf = 0.0;
  double mean_val = 0.0, mean_vec = 0.0, mean_sf = 0.0;
  bool has_vec = false, has_sf = false;
  int degeneracy_mismatches = 0;
  std::vector<PointError> per_point;
};

struct ErrorOptions {
  double tol_degeneracy = 1e-8;
  ResidualMethod residual = ResidualMethod::kFactored;
  /// Name of the reduced observable compared against TruthRecord::observable.
  std::string observable = "structure_factor";
  int threads = 0;
};

/// Eigenvalue, projector and observable errors of `rbm` against the truth
/// records of a sweep over `grid`.
inline ErrorReport EvaluateErrors(const ReducedBasisModel &rbm, const ParameterGrid &grid,
                                  const TruthSweep &truth, const ErrorOptions &opt = {}) {
  if (truth.records.size() != grid.size()) {
    throw StructuralError("truth sweep does not match the test grid");
  }
  const ReducedObservable *obs = nullptr;
  for (const auto &o : rbm.observables) {
    if (o.name == opt.observable) obs = &o;
  }
  ErrorReport rep;
  rep.basis_size = rbm.size();
  rep.has_vec = rbm.has_basis();
  rep.has_sf = obs != nullptr && !truth.records.empty() && !truth.records.front().observable.empty();
  rep.per_point.resize(grid.size());
  ParallelFor(grid.size(), opt.threads, [&](std::size_t i) {
    const TruthRecord &tr = truth.records[i];
    PointError &pe = rep.per_point[i];
    pe.mu = grid.Point(i);
    const ReducedSolution sol = ReducedGround(rbm, pe.mu, opt.tol_degeneracy);
    pe.lambda = tr.manifold.lambda;
    pe.lambda_rb = sol.lambda_rb;
    pe.m = tr.manifold.m;
    pe.m_rb = sol.m;
    pe.residual = Residual(rbm, sol, opt.residual);
    bool abs_mode = false;
    pe.err_val = EigenvalueError(pe.lambda, pe.lambda_rb, &abs_mode);
    if (abs_mode) detail::AddFlag(pe.flags, "absolute_val");
    if (pe.m != pe.m_rb) detail::AddFlag(pe.flags, "m_mismatch");
    if (rep.has_vec) pe.err_vec = ProjectorDistance(tr.manifold.states, Lift(rbm, sol));
    if (rep.has_sf) {
      pe.err_sf = ObservableError(tr.observable, ObservableEval(*obs, sol), &abs_mode);
      if (abs_mode) detail::AddFlag(pe.flags, "absolute_sf");
    }
  });
  for (const auto &pe : rep.per_point) {
    rep.err_val = std::max(rep.err_val, pe.err_val);
    rep.mean_val += pe.err_val;
    if (rep.has_vec) {
      rep.err_vec = std::max(rep.err_vec, pe.err_vec);
      rep.mean_vec += pe.err_vec;
    }
    if (rep.has_sf) {
      rep.err_sf = std::max(rep.err_sf, pe.err_sf);
      rep.mean_sf += pe.err_sf;
    }
    rep.degeneracy_mismatches += pe.m != pe.m_rb ? 1 : 0;
  }
  const double n = static_cast<double>(std::max<std::size_t>(rep.per_point.size(), 1));
  rep.mean_val /= n;
  rep.mean_vec /= n;
  rep.mean_sf /= n;
  return rep;
}

}  // namespace rbm

#endif  // RBM_DIAGNOSTICS_ERRORS_HPP
