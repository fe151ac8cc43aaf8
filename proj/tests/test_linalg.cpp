#include <complex>
#include <stdexcept>

#include "doctest.h"
#include "relaybf/linalg.hpp"

using namespace relaybf::linalg;
using namespace std::complex_literals;

namespace {

ComplexMatrix pauli_y() {
  ComplexMatrix a(2, 2);
  a << 0.0, -1.0i, 1.0i, 0.0;
  return a;
}

ComplexMatrix fixed_herm3() {
  ComplexMatrix a(3, 3);
  a << 2.0, 1.0 + 1.0i, 0.5 - 0.25i,
       1.0 - 1.0i, 3.0, -1.0i,
       0.5 + 0.25i, 1.0i, 1.0;
  return a;
}

ComplexMatrix seeded_matrix(int rows, int cols, unsigned seed) {
  // fixed affine congruential fill; good enough for structural tests
  ComplexMatrix a(rows, cols);
  unsigned s = seed;
  auto next = [&s]() {
    s = s * 1664525u + 1013904223u;
    return static_cast<double>(s >> 8) / static_cast<double>(1u << 24) - 0.5;
  };
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) a(i, j) = Complex(next(), next());
  return a;
}

ComplexMatrix seeded_psd(int n, unsigned seed) {
  const ComplexMatrix b = seeded_matrix(n, n + 2, seed);
  return b * b.adjoint();
}

}  // namespace

TEST_CASE("HermitianMatrix accepts Hermitian input and rejects the rest") {
  const ComplexMatrix a = fixed_herm3();
  const HermitianMatrix h(a);
  CHECK((h.mat() - h.mat().adjoint()).norm() == 0.0);  // exact after symmetrization
  CHECK(h.dim() == 3);
  for (int i = 0; i < 3; ++i) CHECK(h.mat()(i, i).imag() == 0.0);

  ComplexMatrix bad = a;
  bad(0, 1) += 1e-6;
  CHECK_THROWS_AS(HermitianMatrix{bad}, std::invalid_argument);
  // project() takes anything and forces symmetry
  const HermitianMatrix p = HermitianMatrix::project(bad);
  CHECK((p.mat() - p.mat().adjoint()).norm() == 0.0);
}

TEST_CASE("kron matches the index formula and fixed values") {
  ComplexMatrix b(2, 2), c(2, 2);
  b << 1.0 + 0.5i, 2.0 - 1.0i, 3.0 + 0.25i, 4.0 + 2.0i;
  c << 1.0i, 1.0, 1.0, -1.0i;
  const ComplexMatrix k = kron(b, c);
  REQUIRE(k.rows() == 4);
  REQUIRE(k.cols() == 4);
  CHECK(std::abs(k(1, 2) - (2.0 - 1.0i)) < 1e-15);
  CHECK(std::abs(k(3, 1) - (0.25 - 3.0i)) < 1e-15);
  // full index check against kron(A,B)(i*p+k, j*q+l) = A(i,j) B(k,l)
  const ComplexMatrix a = seeded_matrix(3, 2, 11);
  const ComplexMatrix d = seeded_matrix(2, 4, 12);
  const ComplexMatrix kd = kron(a, d);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j)
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 4; ++q)
          CHECK(kd(i * 2 + p, j * 4 + q) == a(i, j) * d(p, q));
}

TEST_CASE("kron mixed-product property") {
  const ComplexMatrix a = seeded_matrix(2, 3, 1);
  const ComplexMatrix b = seeded_matrix(2, 2, 2);
  const ComplexMatrix c = seeded_matrix(3, 2, 3);
  const ComplexMatrix d = seeded_matrix(2, 3, 4);
  const ComplexMatrix lhs = kron(a, b) * kron(c, d);
  const ComplexMatrix rhs = kron(ComplexMatrix(a * c), ComplexMatrix(b * d));
  CHECK((lhs - rhs).norm() < 1e-12 * rhs.norm());
}

TEST_CASE("vec is column-major and unvec inverts it") {
  ComplexMatrix a(2, 2);
  a << 1.0, 3.0i, 2.0, 4.0;
  const ComplexVector v = vec(a);
  REQUIRE(v.size() == 4);
  CHECK(v(0) == Complex(1.0));
  CHECK(v(1) == Complex(2.0));
  CHECK(v(2) == 3.0i);
  CHECK(v(3) == Complex(4.0));
  CHECK((unvec(v, 2, 2) - a).norm() == 0.0);
  CHECK_THROWS_AS(unvec(v, 3, 2), std::invalid_argument);

  // vec(A X B) = (B^T kron A) vec(X): the identity the lifting rests on
  const ComplexMatrix m = seeded_matrix(3, 3, 21);
  const ComplexMatrix x = seeded_matrix(3, 3, 22);
  const ComplexMatrix n = seeded_matrix(3, 3, 23);
  const ComplexVector lhs = vec(ComplexMatrix(m * x * n));
  const ComplexVector rhs = kron(n.transpose(), m) * vec(x);
  CHECK((lhs - rhs).norm() < 1e-12 * rhs.norm());
}

TEST_CASE("herm_eig on analytic and frozen cases") {
  SUBCASE("pauli-y eigenpairs") {
    const HermEig e = herm_eig(HermitianMatrix(pauli_y()));
    REQUIRE(e.values.size() == 2);
    CHECK(e.values(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e.values(1) == doctest::Approx(-1.0).epsilon(1e-14));
    // canonical phase: largest-modulus entry real positive
    for (int k = 0; k < 2; ++k) {
      Eigen::Index imax;
      e.vectors.col(k).cwiseAbs().maxCoeff(&imax);
      CHECK(e.vectors(imax, k).imag() == doctest::Approx(0.0).epsilon(1e-14));
      CHECK(e.vectors(imax, k).real() > 0.0);
    }
  }
  SUBCASE("frozen 3x3 spectrum") {
    const HermEig e = herm_eig(HermitianMatrix(fixed_herm3()));
    CHECK(e.values(0) == doctest::Approx(4.377629301617304).epsilon(1e-12));
    CHECK(e.values(1) == doctest::Approx(1.080739013733504).epsilon(1e-12));
    CHECK(e.values(2) == doctest::Approx(0.5416316846491912).epsilon(1e-12));
  }
  SUBCASE("reconstruction and determinism") {
    const HermitianMatrix h(seeded_psd(5, 31));
    const HermEig e1 = herm_eig(h);
    const HermEig e2 = herm_eig(h);
    CHECK(herm_eig_residual(h, e1) < 1e-12 * h.mat().norm());
    CHECK((e1.vectors - e2.vectors).norm() == 0.0);
    for (int k = 1; k < 5; ++k) CHECK(e1.values(k) <= e1.values(k - 1));
  }
}

TEST_CASE("real embedding preserves trace pairings and PSD") {
  const HermitianMatrix a(seeded_psd(4, 41));
  const HermitianMatrix b(seeded_psd(4, 42));
  const RealMatrix ea = embed_real(a);
  const RealMatrix eb = embed_real(b);
  CHECK(ea.rows() == 8);
  CHECK((ea - ea.transpose()).norm() == 0.0);
  const double lhs = (ea.cwiseProduct(eb)).sum();
  const double rhs = 2.0 * (a.mat() * b.mat()).trace().real();
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  // round trip
  const HermitianMatrix back = unembed_real(ea);
  CHECK((back.mat() - a.mat()).norm() < 1e-13 * a.mat().norm());
  // PSD preserved under embedding
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(ea, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() > -1e-12);
}

TEST_CASE("quadratic forms") {
  ComplexVector w(3);
  w << 1.0 + 2.0i, -0.5 + 0.5i, 0.25 - 1.0i;
  const ComplexMatrix a = fixed_herm3();
  const Complex q = quad_form(w, a);
  CHECK(q.real() == doctest::Approx(8.8125).epsilon(1e-14));
  CHECK(std::abs(q.imag()) < 1e-14);
  CHECK(real_quad_form(w, HermitianMatrix(a)) ==
        doctest::Approx(8.8125).epsilon(1e-14));
}

TEST_CASE("sqrt_psd squares back and clips") {
  const HermitianMatrix g(seeded_psd(4, 51));
  const ComplexMatrix r = sqrt_psd(g);
  CHECK((r * r.adjoint() - g.mat()).norm() < 1e-11 * g.mat().norm());
  // a slightly indefinite input gets clipped, not propagated as NaN
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -1e-13;
  const ComplexMatrix r2 = sqrt_psd(HermitianMatrix(d));
  CHECK(r2.allFinite());
  CHECK((r2 * r2.adjoint())(1, 1).real() >= 0.0);
}

TEST_CASE("null_space_basis finds the kernel of a PSD matrix") {
  // rank-1: vv^H on C^3 has a 2-dimensional kernel
  ComplexVector v(3);
  v << 1.0, 1.0i, -0.5 + 0.25i;
  const HermitianMatrix g = HermitianMatrix::project(v * v.adjoint());
  const ComplexMatrix q = null_space_basis(g);
  REQUIRE(q.cols() == 2);
  CHECK((q.adjoint() * q - ComplexMatrix::Identity(2, 2)).norm() < 1e-12);
  CHECK((g.mat() * q).norm() < 1e-12 * v.squaredNorm());
  // positive definite: empty kernel
  const HermitianMatrix pd =
      HermitianMatrix::project(seeded_psd(3, 61) + ComplexMatrix::Identity(3, 3));
  CHECK(null_space_basis(pd).cols() == 0);
}
