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

#ifndef RBM_MODELS_LATTICE_HPP
#define RBM_MODELS_LATTICE_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rbm/core/affine.hpp"
#include "rbm/core/errors.hpp"
#include "rbm/core/sparse.hpp"

namespace rbm::models {

// Basis convention: site r (1-based) is bit r-1 of the basis-state index.
// A set bit means excited (Rydberg) or spin up.

using LocalOperator = Eigen::Matrix2d;

inline LocalOperator PauliX() { return (LocalOperator() << 0, 1, 1, 0).finished(); }
inline LocalOperator PauliZ() { return (LocalOperator() << -1, 0, 0, 1).finished(); }
inline LocalOperator Occupation() { return (LocalOperator() << 0, 0, 0, 1).finished(); }
inline LocalOperator SpinX() { return 0.5 * PauliX(); }
inline LocalOperator SpinZ() { return 0.5 * PauliZ(); }
/// Real antisymmetric A with S^y = -i A in the (down, up) ordering.
inline LocalOperator SpinYReal() { return (LocalOperator() << 0, -0.5, 0.5, 0).finished(); }

enum class LatticeKind { kRydbergChain, kTriangleLattice };
enum class Boundary { kOpen, kPeriodic };

inline std::string ToString(LatticeKind k) {
  return k == LatticeKind::kRydbergChain ? "rydberg" : "triangle";
}

struct LatticeSpec {
  LatticeKind kind = LatticeKind::kRydbergChain;
  int nx = 2;
  int ny = 1;
  int sites_per_cell = 1;
  Boundary boundary = Boundary::kOpen;

  int num_cells() const { return nx * ny; }
  int num_sites() const { return nx * ny * sites_per_cell; }
  Index hilbert_dim() const { return Index{1} << num_sites(); }

  static LatticeSpec RydbergChain(int nx) {
    if (nx < 2) throw ConfigError("Rydberg chain needs Nx >= 2");
    return {LatticeKind::kRydbergChain, nx, 1, 1, Boundary::kOpen};
  }
  static LatticeSpec TriangleLattice(int nx, int ny) {
    if (nx < 1 || ny < 1) throw ConfigError("triangle lattice needs Nx, Ny >= 1");
    return {LatticeKind::kTriangleLattice, nx, ny, 3, Boundary::kPeriodic};
  }
};

/// Commensurate momenta: 2 pi m / Nx for chains, (2 pi mx / Nx, 2 pi my / Ny)
/// for lattices, enumerated with my fastest.
struct Momentum {
  double kx = 0.0;
  double ky = 0.0;
  int mx = 0;
  int my = 0;
};

inline std::vector<Momentum> MomentumGrid(const LatticeSpec &lattice) {
  std::vector<Momentum> ks;
  for (int mx = 0; mx < lattice.nx; ++mx) {
    for (int my = 0; my < lattice.ny; ++my) {
      ks.push_back({2.0 * std::numbers::pi * mx / lattice.nx,
                    2.0 * std::numbers::pi * my / lattice.ny, mx, my});
    }
  }
  return ks;
}

inline std::string MomentumLabel(const LatticeSpec &lattice, const Momentum &k) {
  if (lattice.kind == LatticeKind::kRydbergChain) {
    return "k" + std::to_string(k.mx);
  }
  return "k" + std::to_string(k.mx) + "_" + std::to_string(k.my);
}

struct Model {
  AffineOperator op;
  LatticeSpec lattice;
};

inline void CheckSite(int site, int n_sites) {
  if (n_sites < 1 || n_sites > 30) throw StructuralError("unsupported number of sites");
  if (site < 1 || site > n_sites) {
    throw StructuralError("site index " + std::to_string(site) + " outside 1.." +
                          std::to_string(n_sites));
  }
}

/// A acting on `site`, identity elsewhere, as a general real sparse matrix.
inline RealSparse LiftSiteReal(const LocalOperator &a, int site, int n_sites) {
  CheckSite(site, n_sites);
  const Index dim = Index{1} << n_sites;
  const Index mask = Index{1} << (site - 1);
  const bool diagonal = a(0, 1) == 0.0 && a(1, 0) == 0.0;
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(diagonal ? dim : 2 * dim));
  for (Index s = 0; s < dim; ++s) {
    const int b = (s & mask) ? 1 : 0;
    if (a(b, b) != 0.0) t.emplace_back(s, s, a(b, b));
    if (!diagonal && a(1 - b, b) != 0.0) t.emplace_back(s ^ mask, s, a(1 - b, b));
  }
  RealSparse m(dim, dim);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

/// Hermitian single-site operator lifted to the full Hilbert space.
inline SparseHermitian LiftSiteOperator(const LocalOperator &a, int site, int n_sites) {
  if (a(0, 1) != a(1, 0)) throw StructuralError("local operator is not Hermitian");
  return SparseHermitian::FromMatrix(LiftSiteReal(a, site, n_sites), 0.0);
}

/// Upper-triangle entries of S_i . S_j (sites 1-based, i != j).
inline void AppendHeisenbergBond(int i, int j, int n_sites, double coupling,
                                 std::vector<Triplet> &upper) {
  CheckSite(i, n_sites);
  CheckSite(j, n_sites);
  if (i == j) throw StructuralError("Heisenberg bond needs two distinct sites");
  const Index dim = Index{1} << n_sites;
  const Index mi = Index{1} << (i - 1), mj = Index{1} << (j - 1);
  for (Index s = 0; s < dim; ++s) {
    const bool bi = s & mi, bj = s & mj;
    upper.emplace_back(s, s, coupling * (bi == bj ? 0.25 : -0.25));
    if (bi != bj) {
      const Index t = s ^ mi ^ mj;
      if (s < t) upper.emplace_back(s, t, coupling * 0.5);
    }
  }
}

inline SparseHermitian HeisenbergBond(int i, int j, int n_sites) {
  std::vector<Triplet> upper;
  AppendHeisenbergBond(i, j, n_sites, 1.0, upper);
  return SparseHermitian::FromUpper(Index{1} << n_sites, upper);
}

}  // namespace rbm::models

#endif  // RBM_MODELS_LATTICE_HPP
