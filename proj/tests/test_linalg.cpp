#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "qcensor/channels.hpp"
#include "qcensor/linalg.hpp"
#include "qcensor/states.hpp"
#include "test_support.hpp"

using namespace qcensor;
using Catch::Approx;

namespace {

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

// Explicit four-index sum for the partial trace of a two-factor operator.
Matrix oracle_trace_first(const Matrix& rho, int da, int db) {
  Matrix out = Matrix::Zero(db, db);
  for (int a = 0; a < da; ++a)
    for (int i = 0; i < db; ++i)
      for (int j = 0; j < db; ++j) out(i, j) += rho(a * db + i, a * db + j);
  return out;
}

}  // namespace

TEST_CASE("kron places blocks in row-major order", "[linalg][kron]") {
  CHECK(max_abs_diff(kron(Matrix::Identity(2, 2), Matrix::Identity(2, 2)), Matrix::Identity(4, 4)) == 0.0);

  const Matrix p0 = diag2(1, 0);
  const Matrix p1 = diag2(0, 1);
  Matrix expected = Matrix::Zero(4, 4);
  expected(1, 1) = 1.0;
  CHECK(max_abs_diff(kron(p0, p1), expected) == 0.0);

  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = test::random_matrix(2, 2, rng), b = test::random_matrix(2, 2, rng);
    const Matrix c = test::random_matrix(2, 2, rng), d = test::random_matrix(2, 2, rng);
    CHECK(max_abs_diff(kron(a, b) * kron(c, d), kron(a * c, b * d)) < 1e-12);
  }
}

TEST_CASE("kron rejects non-finite input", "[linalg][kron]") {
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(kron(bad, Matrix::Identity(2, 2)), DomainError);
}

TEST_CASE("partial_trace", "[linalg][partial_trace]") {
  Rng rng(3);
  SECTION("product state factorizes") {
    const Matrix rho = random_density(3, 3, rng).matrix();
    const Matrix tau = 2.5 * random_density(2, 2, rng).matrix();
    const Matrix out = partial_trace(kron(rho, tau), DimSignature{3, 2}, {0});
    CHECK(max_abs_diff(out, rho * tau.trace()) < 1e-12);
  }
  SECTION("marginal of phi+ is maximally mixed") {
    const Matrix phi = bell_phi_plus(2).matrix();
    const Matrix oracle = oracle_trace_first(phi, 2, 2);
    CHECK(max_abs_diff(oracle, 0.5 * Matrix::Identity(2, 2)) < 1e-15);
    CHECK(max_abs_diff(partial_trace(phi, DimSignature{2, 2}, {1}), oracle) < 1e-15);
  }
  SECTION("keeping everything is the identity") {
    const Matrix rho = random_density(DimSignature{2, 3}, 6, rng).matrix();
    CHECK(max_abs_diff(partial_trace(rho, DimSignature{2, 3}, {0, 1}), rho) == 0.0);
  }
  SECTION("agrees with the explicit sum on random operators") {
    for (int trial = 0; trial < 10; ++trial) {
      const Matrix m = test::random_matrix(6, 6, rng);
      CHECK(max_abs_diff(partial_trace(m, DimSignature{2, 3}, {1}), oracle_trace_first(m, 2, 3)) < 1e-12);
    }
  }
  SECTION("trace preserved on random three-party operators") {
    const DimSignature sig{2, 3, 2};
    for (int trial = 0; trial < 20; ++trial) {
      const Matrix m = test::random_matrix(12, 12, rng);
      for (std::size_t k = 0; k < 3; ++k) {
        const std::size_t keep[] = {k};
        CHECK(std::abs(partial_trace(m, sig, keep).trace() - m.trace()) < 1e-12);
      }
      CHECK(std::abs(partial_trace(m, sig, {0, 2}).trace() - m.trace()) < 1e-12);
    }
  }
  SECTION("middle factor of a triple product") {
    const Matrix a = random_density(2, 2, rng).matrix();
    const Matrix b = random_density(3, 3, rng).matrix();
    const Matrix c = random_density(2, 2, rng).matrix();
    const Matrix out = partial_trace(kron(a, kron(b, c)), DimSignature{2, 3, 2}, {0, 2});
    CHECK(max_abs_diff(out, kron(a, c)) < 1e-12);
  }
  SECTION("errors") {
    const Matrix phi = bell_phi_plus(2).matrix();
    CHECK_THROWS_AS(partial_trace(phi, DimSignature{2, 2}, {2}), DimensionError);
    CHECK_THROWS_AS(partial_trace(phi, DimSignature{2, 3}, {0}), DimensionError);
  }
}

TEST_CASE("partial_transpose", "[linalg][partial_transpose]") {
  Rng rng(5);
  const DimSignature sig{2, 2};
  SECTION("acts on the chosen factor of a product") {
    const Matrix rho = random_density(2, 2, rng).matrix();
    const Matrix tau = random_density(2, 2, rng).matrix();
    CHECK(max_abs_diff(partial_transpose(kron(rho, tau), sig, 1), kron(rho, tau.transpose())) < 1e-15);
    CHECK(max_abs_diff(partial_transpose(kron(rho, tau), sig, 0), kron(rho.transpose(), tau)) < 1e-15);
  }
  SECTION("phi+ has minimum partial-transpose eigenvalue -1/2") {
    const Matrix pt = partial_transpose(bell_phi_plus(2).matrix(), sig, 1);
    const auto ev = test::oracle_eigenvalues(pt);
    CHECK(ev.front() == Approx(-0.5).margin(1e-12));
    CHECK(min_eigenvalue(pt) == Approx(-0.5).margin(1e-12));
  }
  SECTION("involution and spectrum on random states") {
    for (int trial = 0; trial < 10; ++trial) {
      const Matrix m = random_density(DimSignature{2, 3}, 6, rng).matrix();
      for (std::size_t k = 0; k < 2; ++k) {
        CHECK(max_abs_diff(partial_transpose(partial_transpose(m, DimSignature{2, 3}, k), DimSignature{2, 3}, k), m) == 0.0);
      }
      // transposing every factor is the full transpose
      const std::size_t both[] = {0, 1};
      CHECK(max_abs_diff(partial_transpose(m, DimSignature{2, 3}, both), m.transpose()) == 0.0);
    }
    const Matrix tau = random_density(3, 3, rng).matrix();
    const auto before = test::oracle_eigenvalues(tau);
    const auto after = test::oracle_eigenvalues(partial_transpose(tau, DimSignature{3}, 0));
    for (std::size_t i = 0; i < before.size(); ++i) CHECK(after[i] == Approx(before[i]).margin(1e-12));
  }
  SECTION("index out of range") {
    CHECK_THROWS_AS(partial_transpose(bell_phi_plus(2).matrix(), sig, 2), DimensionError);
  }
}

TEST_CASE("hermitian_eig", "[linalg][eig]") {
  SECTION("diagonal input") {
    const auto eig = hermitian_eig(diag2(0.3, 0.7));
    CHECK(eig.values(0) == Approx(0.7));
    CHECK(eig.values(1) == Approx(0.3));
    Matrix swapped = Matrix::Zero(2, 2);
    swapped(1, 0) = 1.0;
    swapped(0, 1) = 1.0;
    CHECK(max_abs_diff(eig.vectors, swapped) < 1e-15);

    const auto eig2 = hermitian_eig(diag2(0.7, 0.3));
    CHECK(max_abs_diff(eig2.vectors, Matrix::Identity(2, 2)) < 1e-15);
  }
  SECTION("rank-one projector") {
    const auto eig = hermitian_eig(test::projector(plus_ket()));
    CHECK(eig.values(0) == Approx(1.0));
    CHECK(eig.values(1) == Approx(0.0).margin(1e-15));
    CHECK(eig.vectors(0, 0).real() == Approx(1 / std::sqrt(2.0)));
    CHECK(eig.vectors(1, 0).real() == Approx(1 / std::sqrt(2.0)));
    CHECK(std::abs(eig.vectors(0, 0).imag()) < 1e-15);
  }
  SECTION("reconstruction and orthonormality up to dimension 16") {
    Rng rng(17);
    for (std::size_t d = 2; d <= 16; ++d) {
      const Matrix h = test::random_hermitian(d, rng);
      const auto eig = hermitian_eig(h);
      const Matrix rebuilt = eig.vectors * eig.values.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
      CHECK(max_abs_diff(rebuilt, h) <= 1e-10);
      CHECK(max_abs_diff(eig.vectors.adjoint() * eig.vectors, Matrix::Identity(h.rows(), h.cols())) <= 1e-10);
      for (Eigen::Index i = 1; i < eig.values.size(); ++i) CHECK(eig.values(i - 1) >= eig.values(i));
      for (Eigen::Index c = 0; c < eig.vectors.cols(); ++c) {
        const Vector v = eig.vectors.col(c);
        const Eigen::Index lead = detail::leading_entry(v);
        CHECK(v(lead).real() > 0.0);
        CHECK(std::abs(v(lead).imag()) < 1e-15);
      }
    }
  }
  SECTION("degenerate eigenspaces get a basis independent of how they were presented") {
    Rng rng(23);
    // Same spectral projectors, two different bases inside the degenerate space.
    const Matrix u = random_unitary(3, rng);
    Matrix rot = Matrix::Identity(3, 3);
    const Matrix w = random_unitary(2, rng);
    rot.topLeftCorner(2, 2) = w;
    const Matrix u2 = u * rot;
    const Matrix d = Eigen::Vector3d(0.4, 0.4, 0.2).cast<Complex>().asDiagonal();
    const auto e1 = hermitian_eig(u * d * u.adjoint());
    const auto e2 = hermitian_eig(u2 * d * u2.adjoint());
    CHECK(max_abs_diff(e1.vectors, e2.vectors) < 1e-9);

    const auto mixed = hermitian_eig(0.5 * Matrix::Identity(2, 2));
    CHECK(max_abs_diff(mixed.vectors, Matrix::Identity(2, 2)) < 1e-15);
  }
  SECTION("non-Hermitian input is rejected") {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(hermitian_eig(m), InvalidStateError);
  }
}

TEST_CASE("von_neumann_entropy", "[linalg][entropy]") {
  CHECK(von_neumann_entropy(test::projector(plus_ket())) == Approx(0.0).margin(1e-12));
  CHECK(von_neumann_entropy(0.5 * Matrix::Identity(2, 2)) == Approx(std::log(2.0)));
  CHECK(von_neumann_entropy(diag2(0.9, 0.1)) == Approx(-0.9 * std::log(0.9) - 0.1 * std::log(0.1)).epsilon(1e-14));
  CHECK(nats_to_bits(std::log(2.0)) == Approx(1.0));

  Rng rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = random_density(3, 2, rng).matrix();
    const Matrix b = random_density(2, 2, rng).matrix();
    const double s = von_neumann_entropy(kron(a, b));
    CHECK(std::abs(s - von_neumann_entropy(a) - von_neumann_entropy(b)) <= 1e-9);
    CHECK(s >= -1e-12);
    CHECK(s <= std::log(6.0) + 1e-12);
  }
}

TEST_CASE("hs_distance", "[linalg][distance]") {
  CHECK(hs_distance(diag2(0.2, 0.8), diag2(0.2, 0.8)) == 0.0);
  CHECK(hs_distance(diag2(1, 0), diag2(0, 1)) == Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(hs_distance(Matrix::Identity(2, 2), Matrix::Identity(3, 3)), DimensionError);

  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix a = test::random_matrix(3, 3, rng), b = test::random_matrix(3, 3, rng),
                 c = test::random_matrix(3, 3, rng);
    CHECK(hs_distance(a, c) <= hs_distance(a, b) + hs_distance(b, c) + 1e-12);
    CHECK(hs_distance(a, b) == Approx(hs_distance(b, a)));
    const Matrix diff = a - b;
    CHECK(hs_distance(a, b) == Approx(std::sqrt((diff.adjoint() * diff).trace().real())));
  }
}

TEST_CASE("is_positive_semidefinite", "[linalg][psd]") {
  CHECK(is_positive_semidefinite(Matrix::Identity(3, 3), 1e-9));
  CHECK_FALSE(is_positive_semidefinite(diag2(1, -0.01), 1e-9));
  // Choi matrix of the transpose map is SWAP, with eigenvalues {1, 1, 1, -1}.
  const ChoiMatrix c = choi(transpose_map(2));
  CHECK_FALSE(is_positive_semidefinite(c.matrix, 1e-9));
  Matrix nonherm = Matrix::Identity(2, 2);
  nonherm(0, 1) = 0.5;
  CHECK_THROWS_AS(is_positive_semidefinite(nonherm, 1e-9), InvalidStateError);
}

TEST_CASE("permute_subsystems", "[linalg]") {
  Rng rng(37);
  const Matrix a = random_density(2, 2, rng).matrix();
  const Matrix b = random_density(3, 3, rng).matrix();
  const std::size_t swap[] = {1, 0};
  CHECK(max_abs_diff(permute_subsystems(kron(a, b), DimSignature{2, 3}, swap), kron(b, a)) < 1e-15);
  const std::size_t bad[] = {0, 0};
  CHECK_THROWS_AS(permute_subsystems(kron(a, b), DimSignature{2, 3}, bad), DimensionError);
}
