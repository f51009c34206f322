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


// Core containers, model builders and the truth solver, checked against
// dense Kronecker oracles built independently here.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "catch_amalgamated.hpp"
#include "rbm/rbm.hpp"

using namespace rbm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Dense Kronecker oracle. Site 1 is the least significant bit, so it is the
// rightmost factor.
Matrix Kron(const Matrix &a, const Matrix &b) {
  Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return k;
}

Matrix SiteOp(const Matrix &local, int site, int n) {
  Matrix acc = Matrix::Identity(1, 1);
  for (int s = n; s >= 1; --s) acc = Kron(acc, s == site ? local : Matrix::Identity(2, 2));
  return acc;
}

Matrix Sx() { return (Matrix(2, 2) << 0, 0.5, 0.5, 0).finished(); }
Matrix SzM() { return (Matrix(2, 2) << -0.5, 0, 0, 0.5).finished(); }
Matrix Num() { return (Matrix(2, 2) << 0, 0, 0, 1).finished(); }
using CMatrix = Eigen::MatrixXcd;

CMatrix CSiteOp(const CMatrix &local, int site, int n) {
  CMatrix acc = CMatrix::Identity(1, 1);
  for (int s = n; s >= 1; --s) {
    const CMatrix b = s == site ? local : CMatrix::Identity(2, 2);
    CMatrix k(acc.rows() * 2, acc.cols() * 2);
    for (Index i = 0; i < acc.rows(); ++i) {
      for (Index j = 0; j < acc.cols(); ++j) k.block(i * 2, j * 2, 2, 2) = acc(i, j) * b;
    }
    acc = k;
  }
  return acc;
}

std::array<CMatrix, 3> PauliHalf() {
  const std::complex<double> I(0, 1);
  CMatrix x(2, 2), y(2, 2), z(2, 2);
  x << 0, 0.5, 0.5, 0;
  y << 0, -0.5 * I, 0.5 * I, 0;
  z << -0.5, 0, 0, 0.5;
  return {x, y, z};
}

Matrix HeisenbergOracle(int i, int j, int n) {
  CMatrix acc = CMatrix::Zero(Index{1} << n, Index{1} << n);
  for (const auto &s : PauliHalf()) acc += CSiteOp(s, i, n) * CSiteOp(s, j, n);
  REQUIRE(acc.imag().cwiseAbs().maxCoeff() < 1e-15);
  return acc.real();
}

Matrix RandomOrthonormal(Index n, Index k, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> d;
  Matrix x(n, k);
  for (Index j = 0; j < k; ++j) {
    for (Index i = 0; i < n; ++i) x(i, j) = d(gen);
  }
  Eigen::HouseholderQR<Matrix> qr(x);
  return qr.householderQ() * Matrix::Identity(n, k);
}

}  // namespace

TEST_CASE("parameter grids and domain checks", "[core]") {
  DomainBox box({0.0, 0.5}, {5.0, 4.0});
  CHECK(box.Contains({2.0, 1.0}));
  CHECK_FALSE(box.Contains({5.5, 1.0}));
  CHECK_THROWS_AS(box.Check({1.0}), DomainError);
  CHECK_THROWS_AS(ParameterPoint({std::nan(""), 1.0}), DomainError);
  CHECK_THROWS_AS(DomainBox({1.0}, {0.0}), ConfigError);

  auto g = ParameterGrid::Uniform(box, {6, 8});
  CHECK(g.size() == 48);
  CHECK(g.Point(0) == ParameterPoint({0.0, 0.5}));
  CHECK(g.Point(47) == ParameterPoint({5.0, 4.0}));
  CHECK(g.Find(g.Point(13)) == 13);
  CHECK(g.Find({0.1, 0.5}) == -1);
  CHECK(g.InsideBox(box));

  // Midpoints sit strictly between consecutive uniform values.
  auto m = ParameterGrid::Midpoints(box, {5, 7});
  for (std::size_t d = 0; d < 2; ++d) {
    const auto &u = g.axes()[d];
    const auto &v = m.axes()[d];
    REQUIRE(v.size() + 1 == u.size());
    for (std::size_t i = 0; i < v.size(); ++i) CHECK_THAT(v[i], WithinAbs(0.5 * (u[i] + u[i + 1]), 1e-14));
  }
  CHECK_THROWS_AS(ParameterGrid({{1.0, 1.0}}), ConfigError);
  CHECK_THROWS_AS(ParameterGrid::Uniform(box, {3}), ConfigError);
}

TEST_CASE("sparse Hermitian storage", "[core]") {
  auto id = SparseHermitian::Identity(16);
  Vector v = Vector::LinSpaced(16, -1.0, 2.0);
  CHECK((id.Apply(v) - v).norm() == 0.0);

  std::mt19937 gen(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> pick(0, 15);
  std::vector<Triplet> upper;
  Matrix dense = Matrix::Zero(16, 16);
  for (int e = 0; e < 40; ++e) {
    int i = pick(gen), j = pick(gen);
    if (i > j) std::swap(i, j);
    const double x = u(gen);
    upper.emplace_back(i, j, x);
    dense(i, j) += x;
    if (i != j) dense(j, i) += x;
  }
  auto h = SparseHermitian::FromUpper(16, upper);
  CHECK(h.HermiticityDefect() == 0.0);
  for (int t = 0; t < 5; ++t) {
    Vector x = Vector::NullaryExpr(16, [&] { return u(gen); });
    Vector ref = dense * x;
    CHECK((h.Apply(x) - ref).norm() <= 1e-14 * ref.norm());
  }
  CHECK_THROWS_AS(h.Apply(Vector(15)), StructuralError);

  std::vector<Triplet> asym = {{0, 1, 1.0}};
  CHECK_THROWS_AS(SparseHermitian::FromTriplets(4, asym), StructuralError);
  CHECK_THROWS_AS(SparseHermitian::FromUpper(4, {{2, 1, 1.0}}), StructuralError);
}

TEST_CASE("site lifting matches the Kronecker oracle", "[models]") {
  for (int n : {1, 2, 3, 5}) {
    for (int r = 1; r <= n; ++r) {
      CHECK(Matrix(models::LiftSiteReal(models::PauliX(), r, n)) == SiteOp(2.0 * Sx(), r, n));
      CHECK(Matrix(models::LiftSiteReal(models::SpinZ(), r, n)) == SiteOp(SzM(), r, n));
      CHECK(Matrix(models::LiftSiteReal(models::Occupation(), r, n)) == SiteOp(Num(), r, n));
    }
  }
  // sigma^x on site 1 of two sites connects states that differ in bit 1.
  Matrix x1 = models::LiftSiteOperator(models::PauliX(), 1, 2).ToDense();
  Matrix expect = Matrix::Zero(4, 4);
  expect(0, 1) = expect(1, 0) = expect(2, 3) = expect(3, 2) = 1.0;
  CHECK(x1 == expect);
  // Occupation on site 2 of three: ones on states 2, 3, 6, 7.
  Vector d = models::LiftSiteOperator(models::Occupation(), 2, 3).Diagonal();
  CHECK(d == (Vector(8) << 0, 0, 1, 1, 0, 0, 1, 1).finished());
  CHECK(models::LiftSiteOperator(Matrix::Identity(2, 2), 2, 3).ToDense() == Matrix::Identity(8, 8));
  CHECK_THROWS_AS(models::LiftSiteOperator(models::PauliX(), 4, 3), StructuralError);
  models::LocalOperator bad;
  bad << 0, 1, 0, 0;
  CHECK_THROWS_AS(models::LiftSiteOperator(bad, 1, 2), StructuralError);
  CHECK((models::HeisenbergBond(1, 3, 4).ToDense() - HeisenbergOracle(1, 3, 4)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Rydberg chain terms and coefficients", "[models]") {
  auto m2 = models::BuildRydberg(2);
  CHECK(m2.op.num_terms() == 3);
  CHECK(m2.op.term(2).ToDense() == Vector((Vector(4) << 0, 0, 0, 1).finished()).asDiagonal().toDenseMatrix());

  // Nx = 3: pairs (1,2), (2,3) at weight 1, (1,3) at 2^-6.
  auto m3 = models::BuildRydberg(3);
  Matrix h3 = SiteOp(Num(), 1, 3) * SiteOp(Num(), 2, 3) + SiteOp(Num(), 2, 3) * SiteOp(Num(), 3, 3) +
              std::pow(2.0, -6) * SiteOp(Num(), 1, 3) * SiteOp(Num(), 3, 3);
  CHECK((m3.op.term(2).ToDense() - h3).cwiseAbs().maxCoeff() < 1e-16);
  Matrix h1 = Matrix::Zero(8, 8), h2 = Matrix::Zero(8, 8);
  for (int r = 1; r <= 3; ++r) {
    h1 += SiteOp(Sx(), r, 3);
    h2 += SiteOp(Num(), r, 3);
  }
  CHECK((m3.op.term(0).ToDense() - h1).cwiseAbs().maxCoeff() == 0.0);
  CHECK((m3.op.term(1).ToDense() - h2).cwiseAbs().maxCoeff() == 0.0);

  auto th = ThetaEval(models::BuildRydberg(4).op, {4.5, 3.7});
  CHECK(th[0] == 1.0);
  CHECK(th[1] == -4.5);
  CHECK_THAT(th[2], WithinRel(std::pow(3.7, 6), 1e-15));
  CHECK(ThetaEval(m2.op, {0.0, 1.0}) == std::vector<double>{1.0, 0.0, 1.0});
  CHECK_THROWS_AS(ThetaEval(m2.op, {6.0, 1.0}), DomainError);
  CHECK_THROWS_AS(models::BuildRydberg(1), ConfigError);

  // Ground energy at (0, 1) against a dense oracle.
  Matrix hd = SiteOp(Sx(), 1, 2) + SiteOp(Sx(), 2, 2) + SiteOp(Num(), 1, 2) * SiteOp(Num(), 2, 2);
  const double e0 = Eigen::SelfAdjointEigenSolver<Matrix>(hd).eigenvalues()[0];
  auto g = SolveGroundManifold(EvaluateHamiltonian(m2.op, {0.0, 1.0}));
  CHECK_THAT(g.lambda, WithinAbs(e0, 1e-13));
  CHECK(g.m == 1);

  // Only theta_1 nonzero gives H_1 back.
  CoefficientMap only_first(3, models::RydbergDefaultDomain(), [](const ParameterPoint &) {
    return std::vector<double>{1.0, 0.0, 0.0};
  });
  AffineOperator op(m3.op.terms(), only_first);
  CHECK(EvaluateHamiltonian(op, {1.0, 1.0}).ToDense() == m3.op.term(0).ToDense());
}

TEST_CASE("triangle lattice against a brute-force builder", "[models]") {
  auto m = models::BuildTriangle(1, 1);
  const ParameterPoint mu{1.0, 1.0, 0.05};
  // Inside the single cell, the inter-trimer bonds wrap onto (3,1), (2,1), (2,3).
  Matrix oracle = mu[0] * HeisenbergOracle(1, 2, 3) + mu[1] * HeisenbergOracle(2, 3, 3) +
                  HeisenbergOracle(3, 1, 3) +
                  mu[2] * (HeisenbergOracle(3, 1, 3) + HeisenbergOracle(2, 1, 3) + HeisenbergOracle(2, 3, 3));
  CHECK((EvaluateHamiltonian(m.op, mu).ToDense() - oracle).cwiseAbs().maxCoeff() < 1e-15);

  CHECK(ThetaEval(models::BuildTriangle(1, 1).op, {1.0, 1.0, 0.1}) == std::vector<double>{1.0, 1.0, 1.0, 0.1});

  // Isotropic triangle (J' = 0): two doublets at -3/4 below the quartet at 3/4.
  auto iso = models::BuildTriangle(1, 1, DomainBox({0, 0, 0}, {2, 2, 0.1}));
  auto spec = DenseFullSpectrum(EvaluateHamiltonian(iso.op, {1.0, 1.0, 0.0}), 64);
  for (int i = 0; i < 4; ++i) CHECK_THAT(spec.values[i], WithinAbs(-0.75, 1e-14));
  for (int i = 4; i < 8; ++i) CHECK_THAT(spec.values[i], WithinAbs(0.75, 1e-14));
  auto g = SolveGroundManifold(EvaluateHamiltonian(iso.op, {1.0, 1.0, 0.0}));
  CHECK(g.m == 4);
  CHECK_THAT(g.lambda, WithinAbs(-0.75, 1e-14));

  // Inter-trimer term: 3 Nx Ny distinct bonds, each with tr (S_i.S_j)^2 = 3/16 dim
  // and vanishing cross traces.
  for (auto [nx, ny] : {std::pair{2, 1}, std::pair{1, 2}, std::pair{2, 2}}) {
    auto t = models::BuildTriangle(nx, ny);
    const auto l = models::LatticeSpec::TriangleLattice(nx, ny);
    CHECK(models::TriangleBonds(l)[3].size() == static_cast<std::size_t>(3 * nx * ny));
    const RealSparse &h4 = t.op.term(3).matrix();
    const double tr2 = h4.cwiseProduct(h4).sum();
    CHECK_THAT(tr2, WithinRel(3.0 * nx * ny * 3.0 / 16.0 * static_cast<double>(l.hilbert_dim()), 1e-14));
    const RealSparse &h1 = t.op.term(0).matrix();
    CHECK_THAT(h1.cwiseProduct(h1).sum(),
               WithinRel(nx * ny * 3.0 / 16.0 * static_cast<double>(l.hilbert_dim()), 1e-14));
  }
}

TEST_CASE("structure factors", "[models]") {
  // |11>: S(0) = 2, S(pi) = 0.
  auto sf = models::RydbergStructureFactor(2);
  Matrix all = Matrix::Zero(4, 1);
  all(3, 0) = 1.0;
  auto s = sf.Evaluate({0.0, 1.0}, all);
  CHECK_THAT(s[0].real(), WithinAbs(2.0, 1e-15));
  CHECK_THAT(std::abs(s[1]), WithinAbs(0.0, 1e-15));
  CHECK(sf.coefficients().labels() == std::vector<std::string>{"k0", "k1"});

  // Random states: real, nonnegative, sum rule.
  auto sf8 = models::RydbergStructureFactor(8);
  for (unsigned seed = 1; seed <= 3; ++seed) {
    Matrix x = RandomOrthonormal(256, 2, seed);
    auto v = sf8.Evaluate({1.0, 1.0}, x);
    double sum = 0.0;
    for (const auto &c : v) {
      CHECK(std::abs(c.imag()) < 1e-13);
      CHECK(c.real() > -1e-13);
      sum += c.real();
    }
    // sum_k S(k) = sum_r <n_r^2> = sum_r <n_r>.
    double occ = 0.0;
    for (int r = 1; r <= 8; ++r) occ += (x.transpose() * SiteOp(Num(), r, 8) * x).trace() / 2.0;
    CHECK_THAT(sum, WithinAbs(occ, 1e-12));
  }

  // Triangle 2x1, dim 64: sum over momenta equals sum_r <Sbar_r . Sbar_r>.
  auto tsf = models::TriangleStructureFactor(2, 1);
  Matrix x = RandomOrthonormal(64, 1, 11);
  auto v = tsf.Evaluate({1.0, 1.0, 0.05}, x);
  CHECK(v.size() == 2);
  double sum = 0.0;
  for (const auto &c : v) {
    CHECK(std::abs(c.imag()) < 1e-13);
    CHECK(c.real() > -1e-13);
    sum += c.real();
  }
  double direct = 0.0;
  for (int c = 0; c < 2; ++c) {
    for (const auto &p : PauliHalf()) {
      CMatrix sbar = CSiteOp(p, 3 * c + 1, 6) + CSiteOp(p, 3 * c + 2, 6) + CSiteOp(p, 3 * c + 3, 6);
      direct += (x.transpose().cast<std::complex<double>>() * sbar * sbar * x.cast<std::complex<double>>())
                    .trace()
                    .real();
    }
  }
  CHECK_THAT(sum, WithinAbs(direct, 1e-12));

  // One cell: total spin 1/2 on the ground doublets, s(s+1) = 3/4.
  auto iso = models::BuildTriangle(1, 1, DomainBox({0, 0, 0}, {2, 2, 0.1}));
  auto g = SolveGroundManifold(EvaluateHamiltonian(iso.op, {1.0, 1.0, 0.0}));
  auto s1 = models::TriangleStructureFactor(1, 1).Evaluate({1.0, 1.0, 0.0}, g.states);
  CHECK_THAT(s1[0].real(), WithinAbs(0.75, 1e-13));
}

TEST_CASE("occupation profile", "[models]") {
  Matrix e = Matrix::Zero(16, 1);
  e(5, 0) = 1.0;
  CHECK(models::OccupationProfile(e) == 1.0);
  Matrix u = Matrix::Constant(16, 1, 0.25);
  CHECK_THAT(models::OccupationProfile(u), WithinAbs(1.0 / 16.0, 1e-16));
  CHECK_THROWS_AS(models::OccupationProfile(Matrix(16, 0)), StructuralError);
}

TEST_CASE("truth solver on small exact cases", "[truth]") {
  // Two-site bond: spectrum {-3/4, 1/4 x3}.
  auto g = SolveGroundManifold(models::HeisenbergBond(1, 2, 2));
  CHECK_THAT(g.lambda, WithinAbs(-0.75, 1e-14));
  CHECK(g.m == 1);
  CHECK_THAT(g.gap, WithinAbs(1.0, 1e-14));

  auto d = SolveGroundManifold(SparseHermitian::Diagonal((Vector(4) << 0, 0, 1, 2).finished()));
  CHECK(d.m == 2);
  CHECK(d.lambda == 0.0);
  auto d2 = SolveGroundManifold(SparseHermitian::Diagonal((Vector(4) << 3, 1, 1, 0).finished()));
  CHECK(d2.m == 1);
  CHECK(d2.lambda == 0.0);

  // Iterative path with a sevenfold cluster that needs the adaptive k.
  const Index n = 600;
  Vector diag = Vector::LinSpaced(n, 1.0, 50.0);
  diag.head(7).setConstant(-2.0);
  std::vector<Triplet> upper;
  for (Index i = 0; i < n; ++i) upper.emplace_back(i, i, diag[i]);
  auto h = SparseHermitian::FromUpper(n, upper);
  TruthOptions opt;
  auto gi = SolveGroundManifold(h, nullptr, opt);
  CHECK(gi.info.method == SolveMethod::kIterative);
  CHECK(gi.m == 7);
  CHECK_THAT(gi.lambda, WithinAbs(-2.0, 1e-12));
  CHECK((gi.states.transpose() * gi.states - Matrix::Identity(7, 7)).norm() < 1e-10);

  Matrix wrong(n - 1, 2);
  CHECK_THROWS_AS(SolveGroundManifold(h, &wrong), StructuralError);
  TruthOptions capped;
  capped.dense_cap = 8;
  CHECK_THROWS_AS(DenseFullSpectrum(h, capped.dense_cap), SolverError);
}

TEST_CASE("iterative and dense manifolds agree", "[truth]") {
  auto m = models::BuildRydberg(8);
  const ParameterPoint mu{4.5, 2.0};
  const auto h = EvaluateHamiltonian(m.op, mu);
  TruthOptions opt;
  opt.dense_below = 0;
  auto it = SolveGroundManifold(h, nullptr, opt, mu);
  auto de = DenseFallback(h, opt);
  CHECK(it.info.method == SolveMethod::kIterative);
  CHECK(it.m == de.m);
  CHECK_THAT(it.lambda, WithinAbs(de.lambda, 1e-10));
  CHECK(ProjectorDistance(it.states, de.states) <= 1e-8);

  // Rayleigh quotient and residual invariants.
  Matrix hx = h.Apply(it.states);
  for (Index j = 0; j < it.states.cols(); ++j) {
    CHECK_THAT(it.states.col(j).dot(hx.col(j)), WithinAbs(it.lambda, 1e-12));
    CHECK((hx.col(j) - it.lambda * it.states.col(j)).norm() <= opt.tol_resid * 1.01);
  }

  // Same seed, same answer.
  auto again = SolveGroundManifold(h, nullptr, opt, mu);
  CHECK_THAT(again.lambda, WithinAbs(it.lambda, 1e-12));
  CHECK(ProjectorDistance(again.states, it.states) <= 1e-8);

  // A triangle point with a fourfold cluster.
  auto t = models::BuildTriangle(1, 2);
  const ParameterPoint tmu{1.0, 1.0, 0.01};
  auto ti = SolveGroundManifold(EvaluateHamiltonian(t.op, tmu), nullptr, opt, tmu);
  auto td = DenseFallback(EvaluateHamiltonian(t.op, tmu), opt);
  CHECK(ti.m == td.m);
  CHECK_THAT(ti.lambda, WithinAbs(td.lambda, 1e-10));
  CHECK(ProjectorDistance(ti.states, td.states) <= 1e-8);
}

TEST_CASE("connected blocks of the sparsity graph", "[truth]") {
  // The triangle Hamiltonian conserves S^z, so components follow magnetization.
  auto t = models::BuildTriangle(1, 1);
  auto blocks = ConnectedBlocks(EvaluateHamiltonian(t.op, {1.0, 0.5, 0.05}).matrix());
  std::vector<std::size_t> sizes;
  for (const auto &b : blocks) sizes.push_back(b.size());
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<std::size_t>{1, 1, 3, 3});
}
