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

#ifndef RBM_MODELS_RYDBERG_HPP
#define RBM_MODELS_RYDBERG_HPP

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "rbm/core/affine.hpp"
#include "rbm/models/lattice.hpp"

namespace rbm::models {

inline DomainBox RydbergDefaultDomain() { return DomainBox({0.0, 0.5}, {5.0, 4.0}); }

/// theta(mu) = (1, -Delta/Omega, n_S^6) for mu = (Delta/Omega, n_S).
inline CoefficientMap RydbergCoefficients(DomainBox domain = RydbergDefaultDomain()) {
  if (domain.dimension() != 2) throw ConfigError("Rydberg domain must be 2-dimensional");
  return CoefficientMap(3, std::move(domain), [](const ParameterPoint &mu) {
    return std::vector<double>{1.0, -mu[0], std::pow(mu[1], 6)};
  });
}

/// Sum over pairs r < r' of (r' - r)^-6 n_r n_r', open chain.
inline Vector RydbergInteractionDiagonal(int nx) {
  const Index dim = Index{1} << nx;
  std::vector<double> pair(static_cast<std::size_t>(nx), 0.0);
  for (int d = 1; d < nx; ++d) pair[static_cast<std::size_t>(d)] = std::pow(static_cast<double>(d), -6);
  Vector diag(dim);
  for (Index s = 0; s < dim; ++s) {
    double e = 0.0;
    for (int r = 0; r < nx; ++r) {
      if (!(s >> r & 1)) continue;
      for (int rp = r + 1; rp < nx; ++rp) {
        if (s >> rp & 1) e += pair[static_cast<std::size_t>(rp - r)];
      }
    }
    diag[s] = e;
  }
  return diag;
}

inline Model BuildRydberg(int nx, DomainBox domain = RydbergDefaultDomain()) {
  LatticeSpec lattice = LatticeSpec::RydbergChain(nx);
  const Index dim = lattice.hilbert_dim();

  std::vector<Triplet> drive;
  drive.reserve(static_cast<std::size_t>(dim * nx));
  for (Index s = 0; s < dim; ++s) {
    for (int r = 0; r < nx; ++r) {
      Index t = s ^ (Index{1} << r);
      if (s < t) drive.emplace_back(s, t, 0.5);
    }
  }

  Vector occupation(dim);
  for (Index s = 0; s < dim; ++s) {
    occupation[s] = std::popcount(static_cast<std::uint64_t>(s));
  }

  std::vector<SparseHermitian> terms;
  terms.push_back(SparseHermitian::FromUpper(dim, drive));
  terms.push_back(SparseHermitian::Diagonal(occupation));
  terms.push_back(SparseHermitian::Diagonal(RydbergInteractionDiagonal(nx)));
  return {AffineOperator(std::move(terms), RydbergCoefficients(std::move(domain))),
          lattice};
}

/// alpha_{r,r'}(k) = exp(-i (r - r') k) / Nx, term index r * Nx + r'.
inline ObservableCoefficients RydbergStructureFactorCoefficients(int nx) {
  LatticeSpec lattice = LatticeSpec::RydbergChain(nx);
  auto ks = MomentumGrid(lattice);
  std::vector<std::string> labels;
  for (const auto &k : ks) labels.push_back(MomentumLabel(lattice, k));
  const std::size_t n = static_cast<std::size_t>(nx);
  return ObservableCoefficients(
      n * n, labels, [ks, n](const ParameterPoint &, std::size_t p) {
        std::vector<Complex> a(n * n);
        const double k = ks[p].kx;
        for (std::size_t r = 0; r < n; ++r) {
          for (std::size_t rp = 0; rp < n; ++rp) {
            double phase = -(static_cast<double>(r) - static_cast<double>(rp)) * k;
            a[r * n + rp] = std::polar(1.0 / static_cast<double>(n), phase);
          }
        }
        return a;
      });
}

/// S(k) = sum_{r,r'} alpha_{r,r'}(k) n_r n_r'.
inline AffineObservable RydbergStructureFactor(int nx) {
  std::vector<RealSparse> factors;
  for (int r = 1; r <= nx; ++r) factors.push_back(LiftSiteReal(Occupation(), r, nx));
  std::vector<std::vector<FactorProduct>> terms;
  for (std::size_t r = 0; r < static_cast<std::size_t>(nx); ++r) {
    for (std::size_t rp = 0; rp < static_cast<std::size_t>(nx); ++rp) {
      terms.push_back({{r, rp, 1.0}});
    }
  }
  return AffineObservable("structure_factor", std::move(factors), std::move(terms),
                          RydbergStructureFactorCoefficients(nx));
}

}  // namespace rbm::models

#endif  // RBM_MODELS_RYDBERG_HPP
