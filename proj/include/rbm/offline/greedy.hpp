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


#ifndef RBM_OFFLINE_GREEDY_HPP
#define RBM_OFFLINE_GREEDY_HPP

#include <chrono>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rbm/core/affine.hpp"
#include "rbm/core/errors.hpp"
#include "rbm/core/parameter.hpp"
#include "rbm/offline/compress.hpp"
#include "rbm/offline/extend.hpp"
#include "rbm/offline/reduced_basis.hpp"
#include "rbm/offline/residual.hpp"
#include "rbm/online/reduced_ground.hpp"
#include "rbm/truth/ground_state.hpp"
#include "rbm/truth/warm_start.hpp"
#include "rbm/util/parallel.hpp"

namespace rbm {

struct GreedyConfig {
  ParameterGrid train_grid;
  /// Stop once the max residual over the grid is at most this.
  double tol = 1e-6;
  /// n_f, the cap on truth solves.
  int max_truth_solves = 200;
  /// Stop once the basis has at least this many columns; 0 disables.
  Index max_basis = 0;
  /// First sample; the first grid point when unset.
  std::optional<ParameterPoint> mu_1;
  /// Relative to the largest singular value of the first snapshot block.
  double compress_tol = 1e-10;
  TruthOptions truth;
  ResidualMethod residual = ResidualMethod::kFactored;
  /// Seed truth solves with the lifted surrogate manifold.
  bool warm_start = true;
  int threads = 0;
};

/// What happened in one pass of the greedy loop.
struct GreedyStep {
  int iteration = 0;
  ParameterPoint mu;
  std::size_t grid_index = 0;
  int m = 0;
  double lambda = 0.0;
  Index added = 0;
  Index basis_size = 0;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  /// Grid index of the next sample, or npos when the loop stops.
  std::size_t next = std::numeric_limits<std::size_t>::max();
  int truth_iterations = 0;
  SolveMethod method = SolveMethod::kIterative;
  bool fell_back = false;
  double wall_time = 0.0;
  std::vector<double> residuals;
};

using GreedyObserver = std::function<void(const GreedyStep &, const ReducedBasisModel &)>;

/// Thrown when a truth solve fails for good; carries the model as built so
/// far.
class TrainingAborted : public SolverError {
 public:
  TrainingAborted(const std::string &what, ReducedBasisModel partial)
      : SolverError(what), partial_(std::make_shared<ReducedBasisModel>(std::move(partial))) {}
  const ReducedBasisModel &partial() const { return *partial_; }

 private:
  std::shared_ptr<ReducedBasisModel> partial_;
};

/// Residual of the reduced solution at every point of `grid`.
inline std::vector<double> ResidualScan(const ReducedBasisModel &rbm, const ParameterGrid &grid,
                                        double tol_degeneracy, ResidualMethod method,
                                        int threads) {
  std::vector<double> res(grid.size());
  ParallelFor(grid.size(), threads, [&](std::size_t i) {
    res[i] = Residual(rbm, ReducedGround(rbm, grid.Point(i), tol_degeneracy), method);
  });
  return res;
}

inline void ValidateGreedy(const AffineOperator &op, const GreedyConfig &cfg) {
  if (cfg.train_grid.size() == 0) throw ConfigError("training grid is empty");
  if (!(cfg.tol > 0.0)) throw ConfigError("greedy tolerance must be positive");
  if (cfg.max_truth_solves < 1) throw ConfigError("max_truth_solves must be at least 1");
  if (cfg.max_basis < 0) throw ConfigError("max_basis must be non-negative");
  if (!(cfg.compress_tol >= 0.0)) throw ConfigError("compress_tol must be non-negative");
  if (cfg.train_grid.dimension() != op.domain().dimension()) {
    throw ConfigError("training grid dimension differs from the parameter domain");
  }
  if (!cfg.train_grid.InsideBox(op.domain())) {
    throw ConfigError("training grid leaves the parameter domain");
  }
  if (cfg.mu_1 && cfg.train_grid.Find(*cfg.mu_1) < 0) {
    throw ConfigError("mu_1 = " + cfg.mu_1->ToString() + " is not a training grid point");
  }
}

/// Residual-driven greedy sampling over `cfg.train_grid`. Reduced blocks of
/// `obs` are formed once the basis is final.
inline ReducedBasisModel GreedyTrain(const AffineOperator &op,
                                     const std::vector<AffineObservable> &obs,
                                     const GreedyConfig &cfg, const GreedyObserver &observer = {}) {
  ValidateGreedy(op, cfg);
  const auto &grid = cfg.train_grid;
  const auto start = std::chrono::steady_clock::now();

  ReducedBasisModel rbm = EmptyModel(op);
  TrainingCache cache = EmptyCache(op);
  std::vector<bool> visited(grid.size(), false);
  std::size_t current = cfg.mu_1 ? static_cast<std::size_t>(grid.Find(*cfg.mu_1)) : 0;
  double compress_abs = -1.0;

  for (int iter = 1;; ++iter) {
    const ParameterPoint mu = grid.Point(current);
    visited[current] = true;

    GroundStateManifold truth;
    try {
      const SparseHermitian hmu = EvaluateHamiltonian(op, mu);
      if (cfg.warm_start && !rbm.empty()) {
        truth = SolveFromSurrogate(hmu, rbm, mu, cfg.truth);
      } else {
        truth = SolveGroundManifold(hmu, nullptr, cfg.truth, mu);
      }
    } catch (const SolverError &e) {
      throw TrainingAborted(std::string("greedy iteration ") + std::to_string(iter) +
                                ": truth solve failed: " + e.what(),
                            rbm);
    }

    if (compress_abs < 0.0) {
      const Eigen::BDCSVD<Matrix> svd(truth.states);
      compress_abs = cfg.compress_tol * svd.singularValues()[0];
    }
    const Matrix u = Compress(truth.states, rbm.basis, rbm.gram, compress_abs);
    ExtendReducedMatrices(rbm, cache, op, u);
    rbm.samples.push_back({mu, truth.m, truth.lambda, u.cols()});

    GreedyStep step;
    step.iteration = iter;
    step.mu = mu;
    step.grid_index = current;
    step.m = truth.m;
    step.lambda = truth.lambda;
    step.added = u.cols();
    step.basis_size = rbm.size();
    step.truth_iterations = truth.info.iterations;
    step.method = truth.info.method;
    step.fell_back = truth.info.fell_back;

    step.residuals =
        ResidualScan(rbm, grid, cfg.truth.tol_degeneracy, cfg.residual, cfg.threads);
    double sum = 0.0;
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double r = step.residuals[i];
      sum += r;
      step.max_residual = std::max(step.max_residual, r);
      if (!visited[i] && (best == std::numeric_limits<std::size_t>::max() ||
                          r > step.residuals[best])) {
        best = i;
      }
    }
    step.mean_residual = sum / static_cast<double>(grid.size());
    rbm.history.push_back(step.max_residual);
    rbm.history_size.push_back(rbm.size());

    const bool done = step.max_residual <= cfg.tol || iter >= cfg.max_truth_solves ||
                      (cfg.max_basis > 0 && rbm.size() >= cfg.max_basis) ||
                      best == std::numeric_limits<std::size_t>::max();
    if (!done) step.next = best;
    step.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (observer) observer(step, rbm);
    if (done) break;
    current = best;
  }

  for (const auto &o : obs) rbm.observables.push_back(PrecomputeObservable(rbm, o));
  return rbm;
}

}  // namespace rbm

#endif  // RBM_OFFLINE_GREEDY_HPP
