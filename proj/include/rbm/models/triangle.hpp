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

#ifndef RBM_MODELS_TRIANGLE_HPP
#define RBM_MODELS_TRIANGLE_HPP

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include "rbm/core/affine.hpp"
#include "rbm/models/lattice.hpp"
#include "rbm/models/rydberg.hpp"

namespace rbm::models {

inline DomainBox TriangleDefaultDomain() {
  return DomainBox({0.0, 0.0, 0.01}, {2.0, 2.0, 0.1});
}

/// theta(mu) = (J1/J3, J2/J3, 1, J'/J3).
inline CoefficientMap TriangleCoefficients(DomainBox domain = TriangleDefaultDomain()) {
  if (domain.dimension() != 3) throw ConfigError("triangle domain must be 3-dimensional");
  return CoefficientMap(4, std::move(domain), [](const ParameterPoint &mu) {
    return std::vector<double>{mu[0], mu[1], 1.0, mu[2]};
  });
}

/// 1-based linear site index of basis element alpha in 1..3 of cell (x, y),
/// with periodic wrap.
inline int TriangleSite(const LatticeSpec &l, int x, int y, int alpha) {
  x = ((x % l.nx) + l.nx) % l.nx;
  y = ((y % l.ny) + l.ny) % l.ny;
  return 3 * (x + l.nx * y) + alpha;
}

using Bond = std::pair<int, int>;

/// Bonds of the four Hamiltonian terms: (1,2), (2,3), (3,1) inside every
/// trimer and the three inter-trimer couplings (r3, r+x 1), (r2, r+y 1),
/// (r2, r+y 3).
inline std::array<std::vector<Bond>, 4> TriangleBonds(const LatticeSpec &l) {
  std::array<std::vector<Bond>, 4> bonds;
  for (int y = 0; y < l.ny; ++y) {
    for (int x = 0; x < l.nx; ++x) {
      bonds[0].emplace_back(TriangleSite(l, x, y, 1), TriangleSite(l, x, y, 2));
      bonds[1].emplace_back(TriangleSite(l, x, y, 2), TriangleSite(l, x, y, 3));
      bonds[2].emplace_back(TriangleSite(l, x, y, 3), TriangleSite(l, x, y, 1));
      bonds[3].emplace_back(TriangleSite(l, x, y, 3), TriangleSite(l, x + 1, y, 1));
      bonds[3].emplace_back(TriangleSite(l, x, y, 2), TriangleSite(l, x, y + 1, 1));
      bonds[3].emplace_back(TriangleSite(l, x, y, 2), TriangleSite(l, x, y + 1, 3));
    }
  }
  return bonds;
}

inline Model BuildTriangle(int nx, int ny, DomainBox domain = TriangleDefaultDomain()) {
  LatticeSpec lattice = LatticeSpec::TriangleLattice(nx, ny);
  const int n = lattice.num_sites();
  std::vector<SparseHermitian> terms;
  for (const auto &term_bonds : TriangleBonds(lattice)) {
    std::vector<Triplet> upper;
    for (const auto &[i, j] : term_bonds) AppendHeisenbergBond(i, j, n, 1.0, upper);
    terms.push_back(SparseHermitian::FromUpper(lattice.hilbert_dim(), upper));
  }
  return {AffineOperator(std::move(terms), TriangleCoefficients(std::move(domain))),
          lattice};
}

/// alpha_{r,r'}(k) = exp(-i (r - r') . k) / (Nx Ny), term index c * cells + c'
/// with c = x + Nx y.
inline ObservableCoefficients TriangleStructureFactorCoefficients(int nx, int ny) {
  LatticeSpec lattice = LatticeSpec::TriangleLattice(nx, ny);
  auto ks = MomentumGrid(lattice);
  std::vector<std::string> labels;
  for (const auto &k : ks) labels.push_back(MomentumLabel(lattice, k));
  const std::size_t cells = static_cast<std::size_t>(lattice.num_cells());
  return ObservableCoefficients(
      cells * cells, labels,
      [ks, cells, nx](const ParameterPoint &, std::size_t p) {
        std::vector<Complex> a(cells * cells);
        for (std::size_t c = 0; c < cells; ++c) {
          for (std::size_t cp = 0; cp < cells; ++cp) {
            double dx = static_cast<double>(static_cast<int>(c) % nx) -
                        static_cast<double>(static_cast<int>(cp) % nx);
            double dy = static_cast<double>(static_cast<int>(c) / nx) -
                        static_cast<double>(static_cast<int>(cp) / nx);
            double phase = -(dx * ks[p].kx + dy * ks[p].ky);
            a[c * cells + cp] = std::polar(1.0 / static_cast<double>(cells), phase);
          }
        }
        return a;
      });
}

/// Structure factor of the trimer total spins. Factors are, per cell c,
/// the components (Sx, A, Sz) of the trimer spin with S^y = -i A; then
/// Sbar_c . Sbar_c' = sum_comp F_c^T F_c'.
inline AffineObservable TriangleStructureFactor(int nx, int ny) {
  LatticeSpec lattice = LatticeSpec::TriangleLattice(nx, ny);
  const int n = lattice.num_sites();
  const std::array<LocalOperator, 3> local = {SpinX(), SpinYReal(), SpinZ()};
  std::vector<RealSparse> factors;
  for (int c = 0; c < lattice.num_cells(); ++c) {
    for (const auto &op : local) {
      RealSparse acc = LiftSiteReal(op, 3 * c + 1, n);
      acc += LiftSiteReal(op, 3 * c + 2, n);
      acc += LiftSiteReal(op, 3 * c + 3, n);
      factors.push_back(std::move(acc));
    }
  }
  const std::size_t cells = static_cast<std::size_t>(lattice.num_cells());
  std::vector<std::vector<FactorProduct>> terms;
  for (std::size_t c = 0; c < cells; ++c) {
    for (std::size_t cp = 0; cp < cells; ++cp) {
      std::vector<FactorProduct> t;
      for (std::size_t comp = 0; comp < 3; ++comp) {
        t.push_back({3 * c + comp, 3 * cp + comp, 1.0});
      }
      terms.push_back(std::move(t));
    }
  }
  return AffineObservable("structure_factor", std::move(factors), std::move(terms),
                          TriangleStructureFactorCoefficients(nx, ny));
}

}  // namespace rbm::models

#endif  // RBM_MODELS_TRIANGLE_HPP
