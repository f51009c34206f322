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


#ifndef RBM_TRUTH_WARM_START_HPP
#define RBM_TRUTH_WARM_START_HPP

#include <cstdint>

#include "rbm/offline/reduced_basis.hpp"
#include "rbm/online/reduced_ground.hpp"
#include "rbm/truth/lobpcg.hpp"

namespace rbm {

/// Initial block for a truth solve at `mu`: the lifted, orthonormalized
/// surrogate manifold B phi_rb(mu), or a seeded random block of width 2
/// when the model is empty.
inline Matrix WarmStartGuess(const ReducedBasisModel &rbm, const ParameterPoint &mu,
                             Index dim, double tol_degeneracy = 1e-8,
                             std::uint64_t seed = 20211124) {
  if (rbm.empty()) {
    Matrix x(dim, 2);
    detail::FillRandom(x, 0, seed);
    detail::Svqb(x, nullptr);
    return x;
  }
  if (rbm.has_basis() && rbm.basis.rows() != dim) {
    throw StructuralError("warm-start basis does not match the operator dimension");
  }
  Matrix x = Lift(rbm, ReducedGround(rbm, mu, tol_degeneracy));
  detail::Svqb(x, nullptr);
  return x;
}

/// Truth solve started from the lifted surrogate manifold.
inline GroundStateManifold SolveFromSurrogate(const SparseHermitian &h, const ReducedBasisModel &rbm,
                                              const ParameterPoint &mu, const TruthOptions &opt = {}) {
  const Matrix guess = WarmStartGuess(rbm, mu, h.dim(), opt.tol_degeneracy, opt.seed);
  return SolveGroundManifold(h, &guess, opt, mu);
}

}  // namespace rbm

#endif  // RBM_TRUTH_WARM_START_HPP
