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

#ifndef RBM_MODELS_MODELS_HPP
#define RBM_MODELS_MODELS_HPP

#include <algorithm>
#include <optional>
#include <string>

#include "rbm/core/affine.hpp"
#include "rbm/models/lattice.hpp"
#include "rbm/models/rydberg.hpp"
#include "rbm/models/triangle.hpp"

namespace rbm::models {

/// Everything needed to rebuild a benchmark model: lattice and parameter box.
struct ModelSpec {
  LatticeSpec lattice;
  DomainBox domain;

  static ModelSpec Rydberg(int nx, std::optional<DomainBox> domain = std::nullopt) {
    return {LatticeSpec::RydbergChain(nx), domain.value_or(RydbergDefaultDomain())};
  }
  static ModelSpec Triangle(int nx, int ny,
                            std::optional<DomainBox> domain = std::nullopt) {
    return {LatticeSpec::TriangleLattice(nx, ny),
            domain.value_or(TriangleDefaultDomain())};
  }

  std::size_t parameter_dim() const {
    return lattice.kind == LatticeKind::kRydbergChain ? 2 : 3;
  }
};

inline Model Build(const ModelSpec &spec) {
  if (spec.lattice.kind == LatticeKind::kRydbergChain) {
    return BuildRydberg(spec.lattice.nx, spec.domain);
  }
  return BuildTriangle(spec.lattice.nx, spec.lattice.ny, spec.domain);
}

/// The coefficient map alone; no Hilbert-space objects are built.
inline CoefficientMap Coefficients(const ModelSpec &spec) {
  if (spec.lattice.kind == LatticeKind::kRydbergChain) {
    return RydbergCoefficients(spec.domain);
  }
  return TriangleCoefficients(spec.domain);
}

inline AffineObservable StructureFactor(const ModelSpec &spec) {
  if (spec.lattice.kind == LatticeKind::kRydbergChain) {
    return RydbergStructureFactor(spec.lattice.nx);
  }
  return TriangleStructureFactor(spec.lattice.nx, spec.lattice.ny);
}

inline ObservableCoefficients StructureFactorCoefficients(const ModelSpec &spec) {
  if (spec.lattice.kind == LatticeKind::kRydbergChain) {
    return RydbergStructureFactorCoefficients(spec.lattice.nx);
  }
  return TriangleStructureFactorCoefficients(spec.lattice.nx, spec.lattice.ny);
}

/// Largest manifold-averaged weight (1/m) sum_j |<e_i|psi_j>|^2 over the
/// canonical basis states e_i.
inline double OccupationProfile(const Matrix &states) {
  if (states.cols() == 0) throw StructuralError("empty state manifold");
  Vector w = states.array().square().rowwise().sum() / static_cast<double>(states.cols());
  return w.maxCoeff();
}

}  // namespace rbm::models

#endif  // RBM_MODELS_MODELS_HPP
