#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "covent/matrix.hpp"
#include "oracles.hpp"

using namespace covent;
using Catch::Matchers::WithinAbs;

namespace {

ComplexMatrix random_matrix(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(d, d);
  for (Eigen::Index c = 0; c < d; ++c)
    for (Eigen::Index r = 0; r < d; ++r) m(r, c) = Complex(g(rng), g(rng));
  return m;
}

ComplexMatrix random_hermitian_matrix(int d, std::mt19937_64& rng) {
  const ComplexMatrix g = random_matrix(d, rng);
  return 0.5 * (g + g.adjoint());
}

}  // namespace

TEST_CASE("kron matches the entry formula", "[matrix]") {
  std::mt19937_64 rng(1);
  for (int da = 1; da <= 3; ++da) {
    for (int db = 1; db <= 4; ++db) {
      const auto a = random_matrix(da, rng), b = random_matrix(db, rng);
      CHECK((kron(a, b) - oracle::kron(a, b)).norm() < 1e-14);
    }
  }
}

TEST_CASE("kron of vectors is consistent with outer products", "[matrix]") {
  ComplexVector a(2), b(3);
  a << 1.0, Complex(0, 2);
  b << 3.0, -1.0, Complex(0.5, 0.5);
  const ComplexVector v = kron(a, b);
  CHECK((kron(ComplexMatrix(a * a.adjoint()), ComplexMatrix(b * b.adjoint())) - v * v.adjoint()).norm() < 1e-13);
}

TEST_CASE("partial transpose agrees with the conjugation-sum oracle", "[matrix]") {
  std::mt19937_64 rng(2);
  for (auto [da, db] : {std::pair{2, 2}, {2, 3}, {3, 2}, {3, 4}}) {
    const ComplexMatrix x = random_matrix(da * db, rng);
    CHECK((partial_transpose(x, da, db, Subsystem::B) - oracle::partial_transpose_b(x, da, db)).norm() < 1e-13);
    CHECK((partial_transpose(x, da, db, Subsystem::A) - oracle::partial_transpose_a(x, da, db)).norm() < 1e-13);
    const SparseComplexMatrix s = x.sparseView();
    CHECK((ComplexMatrix(partial_transpose(s, da, db)) - oracle::partial_transpose_b(x, da, db)).norm() < 1e-13);
  }
}

TEST_CASE("partial transpose properties", "[matrix][property]") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int da = 2 + trial % 3, db = 2 + (trial / 3) % 3;
    const ComplexMatrix x = random_matrix(da * db, rng);
    const ComplexMatrix y = random_matrix(da * db, rng);
    // Involution.
    CHECK((partial_transpose(partial_transpose(x, da, db), da, db) - x).norm() < 1e-13);
    // PT_A PT_B is the full transpose.
    CHECK((partial_transpose(partial_transpose(x, da, db, Subsystem::B), da, db, Subsystem::A) - x.transpose()).norm() < 1e-13);
    // Linear and trace preserving.
    CHECK((partial_transpose(ComplexMatrix(2.0 * x + y), da, db) - 2.0 * partial_transpose(x, da, db) -
           partial_transpose(y, da, db)).norm() < 1e-12);
    CHECK(std::abs(partial_transpose(x, da, db).trace() - x.trace()) < 1e-12);
    // Frobenius isometry.
    CHECK_THAT(partial_transpose(x, da, db).norm(), WithinAbs(x.norm(), 1e-12));
    // Hermiticity is preserved.
    const ComplexMatrix h = random_hermitian_matrix(da * db, rng);
    CHECK(hermiticity_defect(partial_transpose(h, da, db)) < 1e-14);
  }
}

TEST_CASE("partial transpose of a product acts factorwise", "[matrix]") {
  std::mt19937_64 rng(4);
  const auto a = random_matrix(2, rng), b = random_matrix(3, rng);
  CHECK((partial_transpose(kron(a, b), 2, 3) - kron(a, b.transpose())).norm() < 1e-13);
  CHECK((partial_transpose(kron(a, b), 2, 3, Subsystem::A) - kron(a.transpose(), b)).norm() < 1e-13);
}

TEST_CASE("partial transpose rejects a bad bipartition", "[matrix]") {
  CHECK_THROWS_AS(partial_transpose(ComplexMatrix::Identity(6, 6), 4, 2), DimensionError);
  CHECK_THROWS_AS(partial_transpose(ComplexMatrix(2, 3), 1, 2), DimensionError);
  CHECK_THROWS_AS(partial_transpose(ComplexMatrix::Identity(4, 4), 0, 4), DimensionError);
}

TEST_CASE("Hermitian spectra agree with the general eigensolver", "[matrix]") {
  std::mt19937_64 rng(5);
  for (int d : {1, 2, 5, 9}) {
    const ComplexMatrix h = random_hermitian_matrix(d, rng);
    const RealVector ev = hermitian_eigenvalues(h);
    CHECK((ev - oracle::eigenvalues(h)).cwiseAbs().maxCoeff() < 1e-10);
    for (Eigen::Index i = 1; i < ev.size(); ++i) CHECK(ev(i - 1) <= ev(i));
    CHECK_THAT(hermitian_determinant(h), WithinAbs(h.determinant().real(), 1e-9 * std::max(1.0, std::abs(h.determinant()))));
  }
}

TEST_CASE("non-Hermitian input is rejected with its defect", "[matrix]") {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  m(0, 1) = 1.0;
  try {
    hermitian_eigenvalues(m);
    FAIL("expected NotHermitianError");
  } catch (const NotHermitianError& e) {
    CHECK(e.defect() > 0.5);
  }
  ComplexMatrix nan = ComplexMatrix::Identity(2, 2);
  nan(0, 0) = std::nan("");
  CHECK_THROWS_AS(hermitian_eigenvalues(nan), ValidationError);
  CHECK_THROWS_AS(hermitian_eigenvalues(ComplexMatrix(2, 3)), DimensionError);
}

TEST_CASE("PSD projection is the Frobenius-nearest PSD matrix", "[matrix][property]") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix h = random_hermitian_matrix(6, rng);
    const ComplexMatrix p = psd_project(h);
    CHECK(hermitian_eigenvalues(p)(0) > -1e-12);
    CHECK((psd_project(p) - p).norm() < 1e-12);
    // Residual h - p is negative semidefinite and orthogonal to p.
    CHECK(hermitian_eigenvalues(ComplexMatrix(h - p))(5) < 1e-12);
    CHECK(std::abs((p * (h - p)).trace()) < 1e-10);
    // No random PSD candidate is closer.
    for (int k = 0; k < 5; ++k) {
      const ComplexMatrix g = random_matrix(6, rng);
      const ComplexMatrix q = g * g.adjoint() * 0.1;
      CHECK((h - p).norm() <= (h - q).norm() + 1e-12);
    }
  }
}
