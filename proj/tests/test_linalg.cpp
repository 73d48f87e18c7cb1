#include <doctest.h>

#include <random>

#include "parrondo/linalg.hpp"

using namespace parrondo;

TEST_SUITE_BEGIN("linalg");

TEST_CASE("rank-one doubly stochastic map converges in one step") {
  RMatrix m(2, 2);
  m << 0.5, 0.5, 0.5, 0.5;
  FixedPointReport r = pf_fixed_point(StochasticMatrix(m));
  CHECK(r.converged);
  CHECK(r.iterations == 1);
  CHECK(r.vector[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.vector[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("permutation has no fixed point under iteration") {
  RMatrix m(2, 2);
  m << 0, 1, 1, 0;
  FixedPointReport r = pf_fixed_point(StochasticMatrix(m));
  CHECK(!r.converged);
}

TEST_CASE("reported residual bounds the fixed-point defect") {
  std::mt19937_64 rng(5);
  std::exponential_distribution<double> expo(1.0);
  for (int trial = 0; trial < 20; ++trial) {
    int dim = 2 + static_cast<int>(rng() % 5);
    RMatrix m(dim, dim);
    for (int j = 0; j < dim; ++j) {
      for (int i = 0; i < dim; ++i) m(i, j) = expo(rng) + 1e-6;
      m.col(j) /= m.col(j).sum();
    }
    StochasticMatrix M(m);
    FixedPointReport r = pf_fixed_point(M, 1e-10, 1L << 30);
    REQUIRE(r.converged);
    CHECK((M.entries * r.vector - r.vector).cwiseAbs().sum() <= 1e-10);
  }
}

TEST_CASE("fixed point matches a dense eigensolver") {
  std::mt19937_64 rng(7);
  std::exponential_distribution<double> expo(1.0);
  for (int trial = 0; trial < 50; ++trial) {
    int dim = 2 + static_cast<int>(rng() % 5);
    RMatrix m(dim, dim);
    for (int j = 0; j < dim; ++j) {
      for (int i = 0; i < dim; ++i) m(i, j) = expo(rng) + 1e-6;
      m.col(j) /= m.col(j).sum();
    }
    FixedPointReport r = pf_fixed_point(StochasticMatrix(m), 1e-12, 1L << 35);
    REQUIRE(r.converged);
    Eigen::EigenSolver<RMatrix> es(m);
    int best = 0;
    for (int k = 1; k < dim; ++k)
      if (std::abs(es.eigenvalues()[k] - 1.0) < std::abs(es.eigenvalues()[best] - 1.0))
        best = k;
    RVector v = es.eigenvectors().col(best).real();
    v /= v.sum();
    CHECK((v - r.vector).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("constant channel reaches its target in one step") {
  CMatrix sigma(2, 2);
  sigma << 0.75, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.25;
  auto channel = [&](const CMatrix& rho) { return (rho.trace() * sigma).eval(); };
  FixedPointReport r = quantum_pf_fixed_point(channel, 2);
  CHECK(r.converged);
  CHECK(r.iterations == 1);
  CHECK((r.matrix - sigma).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("identity channel is not a fixed-point map") {
  auto channel = [](const CMatrix& rho) { return rho; };
  FixedPointReport r = quantum_pf_fixed_point(channel, 2);
  CHECK(!r.converged);
}

TEST_CASE("dephasing channel keeps all diagonal states fixed") {
  CMatrix e = CMatrix::Zero(2, 2);
  e(0, 0) = 1.0;
  CMatrix f = CMatrix::Identity(2, 2) - e;
  auto channel = [&](const CMatrix& rho) { return (e * rho * e + f * rho * f).eval(); };
  FixedPointReport r = quantum_pf_fixed_point(channel, 2);
  CHECK(!r.converged);
}

TEST_CASE("non-trace-preserving channel is rejected") {
  auto broken = [](const CMatrix& rho) { return (0.5 * rho).eval(); };
  CHECK_THROWS_AS(quantum_pf_fixed_point(broken, 2), ValidationError);
}

TEST_CASE("converged quantum fixed point is a density matrix") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix g(4, 2);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 2; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix v = CMatrix(qr.householderQ()).leftCols(2);
  CMatrix k1 = v.topRows(2), k2 = v.bottomRows(2);
  auto channel = [&](const CMatrix& rho) {
    return (k1 * rho * k1.adjoint() + k2 * rho * k2.adjoint()).eval();
  };
  FixedPointReport r = quantum_pf_fixed_point(channel, 2, 1e-11, 1L << 35);
  REQUIRE(r.converged);
  CHECK((r.matrix - r.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(r.matrix, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() > -1e-10);
  CHECK(std::abs(r.matrix.trace().real() - 1.0) < 1e-10);
}

TEST_CASE("trace norm of the identity counts the dimension") {
  CHECK(trace_norm(CMatrix::Identity(3, 3)) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("trace norm separates orthonormal rank-one projectors") {
  CVector psi(3), xi(3);
  psi << 1, 0, 0;
  xi << 0, Complex(0, 1), 0;
  CMatrix diff = xi * xi.adjoint() - psi * psi.adjoint();
  CHECK(trace_norm(diff) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("trace norm agrees with the eigenvalues of A^+A") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    CMatrix a(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) a(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a.adjoint() * a, Eigen::EigenvaluesOnly);
    double expect = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    CHECK(trace_norm(a) == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("trace norm is additive on block-diagonal input") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix a(2, 2), b(3, 3);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) a(i, j) = Complex(gauss(rng), gauss(rng));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b(i, j) = Complex(gauss(rng), gauss(rng));
  CMatrix block = CMatrix::Zero(5, 5);
  block.topLeftCorner(2, 2) = a;
  block.bottomRightCorner(3, 3) = b;
  CHECK(trace_norm(block) ==
        doctest::Approx(trace_norm(a) + trace_norm(b)).epsilon(1e-10));
}

TEST_CASE("vectorization fixes the row-major ordering") {
  Eigen::Vector4cd x = vec2(DensityMatrix::maximally_mixed(2));
  CHECK(std::abs(x[0] - 0.5) < 1e-15);
  CHECK(std::abs(x[1]) < 1e-15);
  CHECK(std::abs(x[2]) < 1e-15);
  CHECK(std::abs(x[3] - 0.5) < 1e-15);

  Eigen::Vector4cd ground = vec2(DensityMatrix::pure_basis(2, 0));
  CHECK(std::abs(ground[0] - 1.0) < 1e-15);
  CHECK(std::abs(ground[1]) + std::abs(ground[2]) + std::abs(ground[3]) < 1e-15);
}

TEST_CASE("vec2 round trip") {
  CMatrix rho(2, 2);
  rho << 0.7, Complex(0.1, 0.05), Complex(0.1, -0.05), 0.3;
  DensityMatrix d(rho);
  DensityMatrix back = unvec2(vec2(d));
  CHECK((back.entries - d.entries).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("validation rejects malformed inputs") {
  RMatrix bad(2, 2);
  bad << 0.5, 0.5, 0.4, 0.5;  // first column sums to 0.9
  CHECK_THROWS_AS(StochasticMatrix{bad}, ValidationError);
  CHECK_THROWS_AS(trace_norm(CMatrix::Zero(2, 3)), ValidationError);
  RVector negative(2);
  negative << 1.5, -0.5;
  CHECK_THROWS_AS(ProbVector{negative}, ValidationError);
}

TEST_SUITE_END();
