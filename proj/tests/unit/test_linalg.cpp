#include "ergoprobe/linalg.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace ergoprobe;

namespace {

MatrixXd random_symmetric(int n, unsigned seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> d;
    MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a(i, j) = d(gen);
    return 0.5 * (a + a.transpose());
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("symmetric matrix enforces its invariants") {
    MatrixXd a(2, 2);
    a << 1, 2, 3, 4;
    const DenseSymMatrix s(a);
    CHECK(s.matrix()(0, 1) == s.matrix()(1, 0));
    CHECK_THROWS_AS(DenseSymMatrix(MatrixXd(1, 1)), std::invalid_argument);
    CHECK_THROWS_AS(DenseSymMatrix(MatrixXd(2, 3)), std::invalid_argument);
}

TEST_CASE("eigh on identity and diagonal inputs") {
    const auto id = eigh(DenseSymMatrix(MatrixXd::Identity(4, 4)));
    CHECK(id.energies.isApproxToConstant(1.0));
    CHECK(id.vectors.isApprox(MatrixXd::Identity(4, 4)));

    VectorXd d(3);
    d << 3, 1, 2;
    const auto sp = eigh(DenseSymMatrix(MatrixXd(d.asDiagonal())));
    CHECK(sp.energies(0) == doctest::Approx(1.0));
    CHECK(sp.energies(1) == doctest::Approx(2.0));
    CHECK(sp.energies(2) == doctest::Approx(3.0));
    CHECK(sp.vectors(1, 0) == 1.0);
    CHECK(sp.vectors(2, 1) == 1.0);
    CHECK(sp.vectors(0, 2) == 1.0);
}

TEST_CASE("eigh reconstruction, orthonormality and sign convention") {
    const MatrixXd h = random_symmetric(50, 7);
    const auto sp = eigh(DenseSymMatrix(h));
    const MatrixXd& q = sp.vectors;
    const double scale = h.cwiseAbs().maxCoeff();
    const MatrixXd rebuilt = q * sp.energies.asDiagonal() * q.transpose();
    CHECK((rebuilt - h).cwiseAbs().maxCoeff() <= 1e-8 * scale);
    CHECK((q.transpose() * q - MatrixXd::Identity(50, 50)).cwiseAbs().maxCoeff() <= 1e-10);
    for (Index i = 1; i < 50; ++i)
        CHECK(sp.energies(i) >= sp.energies(i - 1));
    for (Index c = 0; c < 50; ++c) {
        Index r;
        q.col(c).cwiseAbs().maxCoeff(&r);
        CHECK(q(r, c) > 0.0);
    }
    // idempotence
    const auto again = eigh(DenseSymMatrix(rebuilt));
    CHECK((again.energies - sp.energies).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("eigh rejects non-finite entries") {
    MatrixXd h = MatrixXd::Identity(3, 3);
    h(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(eigh(DenseSymMatrix(h)), std::invalid_argument);
}

TEST_CASE("kron matches the index formula") {
    const MatrixXd i2 = MatrixXd::Identity(2, 2);
    CHECK(kron(i2, i2) == MatrixXd::Identity(4, 4));
    VectorXd d(4);
    d << 1, 1, -1, -1;
    CHECK(kron(pauli(PauliKind::z), i2) == MatrixXd(d.asDiagonal()));

    MatrixXd xx(4, 4);
    xx << 0, 0, 0, 1,
          0, 0, 1, 0,
          0, 1, 0, 0,
          1, 0, 0, 0;
    CHECK(kron(pauli(PauliKind::x), pauli(PauliKind::x)) == xx);

    const MatrixXd a = random_symmetric(3, 1), b = random_symmetric(4, 2).topLeftCorner(4, 2);
    CHECK(kron(a, b) == oracle::kron(a, b));
}

TEST_CASE("kron associativity on 2x2 triples is exact") {
    // small integers keep every product exact
    const MatrixXd a = (random_symmetric(2, 3) * 8).array().round(), b = (random_symmetric(2, 4) * 8).array().round(),
                   c = (random_symmetric(2, 5) * 8).array().round();
    CHECK(kron(kron(a, b), c) == kron(a, kron(b, c)));
}

TEST_CASE("kron dimension guard") {
    const MatrixXd a = MatrixXd::Identity(16, 16);
    CHECK_THROWS_AS(kron(a, a, 128), std::length_error);
    MatrixXd bad = MatrixXd::Identity(2, 2);
    bad(0, 1) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(kron(bad, bad), std::invalid_argument);
}

TEST_CASE("pauli_site ordering and algebra") {
    VectorXd d(2);
    d << 1, -1;
    CHECK(pauli_site(PauliKind::z, 1, 1) == MatrixXd(d.asDiagonal()));

    const MatrixXd z1 = pauli_site(PauliKind::z, 1, 2), x2 = pauli_site(PauliKind::x, 2, 2);
    CHECK(z1 * x2 == x2 * z1);
    // site 1 is the least-significant index
    VectorXd dz(4);
    dz << 1, -1, 1, -1;
    CHECK(z1 == MatrixXd(dz.asDiagonal()));

    // sigma+ sigma- + h.c. on one site is the identity
    const MatrixXd p = pauli_site(PauliKind::plus, 1, 2), m = pauli_site(PauliKind::minus, 1, 2);
    CHECK(p * m + m * p == MatrixXd::Identity(4, 4));
    MatrixXd pm(4, 4);
    pm << 1, 0, 0, 0,
          0, 0, 0, 0,
          0, 0, 1, 0,
          0, 0, 0, 0;
    CHECK(p * m == pm);

    CHECK_THROWS(pauli_site(PauliKind::z, 0, 2));
    CHECK_THROWS(pauli_site(PauliKind::z, 3, 2));
}

TEST_CASE("site products agree with explicit kron chains") {
    const MatrixXd i2 = MatrixXd::Identity(2, 2);
    const MatrixXd expected = oracle::kron(oracle::kron(pauli(PauliKind::x), i2), pauli(PauliKind::z));
    CHECK(site_product<double>({{PauliKind::z, 1}, {PauliKind::x, 3}}, 3) == expected);
}

}
