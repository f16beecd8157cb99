#include <catch2/catch_amalgamated.hpp>

#include "covent/observables.hpp"
#include "oracles.hpp"

using namespace covent;

TEST_CASE("collective spins match sums of Paulis on the symmetric subspace", "[observables]") {
  for (int m = 1; m <= 6; ++m) {
    const SpinTriple s = collective_spin(m);
    CHECK((s.x - oracle::collective(pauli::x(), m)).norm() < 1e-12);
    CHECK((s.y - oracle::collective(pauli::y(), m)).norm() < 1e-12);
    CHECK((s.z - oracle::collective(pauli::z(), m)).norm() < 1e-12);
  }
}

TEST_CASE("collective spins obey the Pauli-sum algebra", "[observables][property]") {
  for (int m : {1, 2, 7, 20}) {
    const SpinTriple s = collective_spin(m);
    // [S^x, S^y] = 2i S^z for S = sum sigma.
    CHECK((s.x * s.y - s.y * s.x - 2.0 * kI * s.z).norm() < 1e-9 * m * m);
    const ComplexMatrix casimir = s.x * s.x + s.y * s.y + s.z * s.z;
    const double expected = static_cast<double>(m) * (m + 2);
    CHECK((casimir - expected * ComplexMatrix::Identity(m + 1, m + 1)).norm() < 1e-9 * expected);
    CHECK((s.x.transpose() - s.x).norm() == 0.0);
    CHECK((s.y.transpose() + s.y).norm() == 0.0);
  }
}

TEST_CASE("observables validate Hermiticity and parity", "[observables]") {
  ComplexMatrix bad = ComplexMatrix::Zero(4, 4);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(Observable("bad", bad, Support::Joint, std::nullopt, 2, 2), NotHermitianError);
  CHECK_THROWS_AS(Observable("YY", kron(pauli::y(), pauli::y()), Support::Joint, 1, 2, 2), ValidationError);
  CHECK_THROWS_AS(Observable("XX", kron(pauli::x(), pauli::x()), Support::Joint, 0, 2, 2), ValidationError);
  CHECK_THROWS_AS(Observable("XX", kron(pauli::x(), pauli::x()), Support::Joint, 1, 3, 2), DimensionError);
}

TEST_CASE("parity tags follow the transpose of the B factor", "[observables]") {
  const auto b_y = Observable::local_b("y", pauli::y(), 2);
  CHECK(b_y.pt_parity() == -1);
  CHECK(Observable::local_b("x", pauli::x(), 2).pt_parity() == 1);
  CHECK(Observable::local_a("y", pauli::y(), 2).pt_parity() == 1);
  ComplexMatrix mixed = pauli::x() + pauli::y();
  CHECK_FALSE(Observable::local_b("x+y", mixed, 2).pt_parity().has_value());
  for (const auto& o : pauli_product_set()) {
    const ComplexMatrix pt = oracle::partial_transpose_b(o.matrix(), 2, 2);
    CHECK((pt - static_cast<double>(*o.pt_parity()) * o.matrix()).norm() < 1e-14);
  }
}

TEST_CASE("observable sets reject duplicates and mixed bipartitions", "[observables]") {
  std::vector<Observable> dup{Observable::local_a("a", pauli::x(), 2), Observable::local_a("a", pauli::z(), 2)};
  CHECK_THROWS_AS(ObservableSet(dup, 2, 2), ValidationError);
  std::vector<Observable> mixed{Observable::local_a("a", pauli::x(), 2), Observable::local_a("b", pauli::x(), 3)};
  CHECK_THROWS_AS(ObservableSet(mixed, 2, 2), DimensionError);
  CHECK_THROWS_AS(ObservableSet({}, 2, 2), ValidationError);
  const auto set = collective_spin_set(2);
  const auto sub = set.select({5, 0});
  CHECK(sub.size() == 2);
  CHECK(sub[0].label() == "Sz_B");
  CHECK_THROWS(set.select({6}));
}

TEST_CASE("standard sets have the documented layout", "[observables]") {
  const auto spins = collective_spin_set(3);
  REQUIRE(spins.size() == 6);
  CHECK(spins.dim() == 16);
  CHECK(spins[1].pt_parity() == 1);   // S^y_A untouched by PT_B
  CHECK(spins[4].pt_parity() == -1);  // S^y_B flips sign
  const auto hp = hp_quadrature_set(4);
  REQUIRE(hp.size() == 4);
  const SpinTriple s = collective_spin(4);
  CHECK((hp[3].matrix() - kron(ComplexMatrix::Identity(5, 5), ComplexMatrix(s.z / std::sqrt(8.0)))).norm() < 1e-14);
  CHECK(hp[2].pt_parity() == -1);
}

TEST_CASE("rotations", "[observables]") {
  const Rotation3 r = diagonal_rotation();
  CHECK_NOTHROW(require_orthogonal(r));
  CHECK_THROWS_AS(require_orthogonal(2.0 * r), ValidationError);
  const SpinTriple s = collective_spin(3);
  const SpinTriple rs = rotate(s, r);
  CHECK((rs.x - (s.x + s.y) / std::sqrt(2.0)).norm() < 1e-14);
  CHECK((rs.y - (s.y - s.x) / std::sqrt(2.0)).norm() < 1e-14);
  CHECK((rs.z - s.z).norm() == 0.0);
  const auto rotated = rotate_so3(collective_spin_set(3), r);
  CHECK(rotated[0].label() == "Sx_A'");
  CHECK_FALSE(rotated[3].pt_parity().has_value());
  CHECK_THROWS_AS(rotate_so3(hp_quadrature_set(3), r), ValidationError);
  // Rotated HP quadratures lose their definite parity.
  CHECK_FALSE(hp_quadrature_set(3, r)[2].pt_parity().has_value());
}
