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


#ifndef RBM_DIAGNOSTICS_TRUTH_SWEEP_HPP
#define RBM_DIAGNOSTICS_TRUTH_SWEEP_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rbm/core/affine.hpp"
#include "rbm/core/parameter.hpp"
#include "rbm/offline/reduced_basis.hpp"
#include "rbm/truth/ground_state.hpp"
#include "rbm/truth/warm_start.hpp"
#include "rbm/util/parallel.hpp"

namespace rbm {

/// Where the initial block of each truth solve in a sweep comes from.
enum class GuessMode {
  kCold,
  /// The manifold of the previous grid point (sweep runs sequentially).
  kNeighbor,
  /// The lifted surrogate manifold.
  kSurrogate,
};

inline std::string ToString(GuessMode g) {
  switch (g) {
    case GuessMode::kCold: return "cold";
    case GuessMode::kNeighbor: return "neighbor";
    case GuessMode::kSurrogate: return "surrogate";
  }
  return "?";
}

struct TruthRecord {
  GroundStateManifold manifold;
  /// All outputs of the observable, when one was given.
  std::vector<Complex> observable;
};

struct TruthSweep {
  std::vector<TruthRecord> records;
  long total_iterations = 0;
  int fallbacks = 0;
};

struct TruthSweepOptions {
  TruthOptions truth;
  GuessMode guess = GuessMode::kCold;
  /// Required for GuessMode::kSurrogate.
  const ReducedBasisModel *surrogate = nullptr;
  int threads = 0;
};

/// Truth solves at every point of `grid`, in grid order.
inline TruthSweep SweepTruth(const AffineOperator &op, const ParameterGrid &grid,
                             const TruthSweepOptions &opt,
                             const AffineObservable *observable = nullptr) {
  if (opt.guess == GuessMode::kSurrogate && (!opt.surrogate || !opt.surrogate->has_basis())) {
    throw StateError("surrogate guesses need a model with its basis");
  }
  TruthSweep out;
  out.records.resize(grid.size());
  auto record = [&](std::size_t i, GroundStateManifold g) {
    TruthRecord &rec = out.records[i];
    rec.manifold = std::move(g);
    if (observable) rec.observable = observable->Evaluate(rec.manifold.mu, rec.manifold.states);
  };
  if (opt.guess == GuessMode::kNeighbor) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const ParameterPoint mu = grid.Point(i);
      const Matrix *guess = i == 0 ? nullptr : &out.records[i - 1].manifold.states;
      record(i, SolveGroundManifold(EvaluateHamiltonian(op, mu), guess, opt.truth, mu));
    }
  } else {
    ParallelFor(grid.size(), opt.threads, [&](std::size_t i) {
      const ParameterPoint mu = grid.Point(i);
      const SparseHermitian h = EvaluateHamiltonian(op, mu);
      if (opt.guess == GuessMode::kSurrogate) {
        record(i, SolveFromSurrogate(h, *opt.surrogate, mu, opt.truth));
      } else {
        record(i, SolveGroundManifold(h, nullptr, opt.truth, mu));
      }
    });
  }
  for (const auto &r : out.records) {
    out.total_iterations += r.manifold.info.iterations;
    out.fallbacks += r.manifold.info.fell_back ? 1 : 0;
  }
  return out;
}

}  // namespace rbm

#endif  // RBM_DIAGNOSTICS_TRUTH_SWEEP_HPP
