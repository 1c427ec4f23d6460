#pragma once

// Helpers shared by the unit tests: random operators and independent
// brute-force oracles that do not go through the library's code paths.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "qcensor/linalg.hpp"
#include "qcensor/random.hpp"

namespace qcensor::test {

inline Matrix random_hermitian(std::size_t d, Rng& rng) {
  Matrix g(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  return 0.5 * (g + g.adjoint());
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  return g;
}

/// Eigenvalues of a Hermitian matrix via a generic (non-selfadjoint) solver, ascending.
inline std::vector<double> oracle_eigenvalues(const Matrix& h) {
  Eigen::ComplexEigenSolver<Matrix> solver(h);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) out.push_back(solver.eigenvalues()(i).real());
  std::sort(out.begin(), out.end());
  return out;
}

inline Matrix projector(const Vector& v) { return v * v.adjoint(); }

}  // namespace qcensor::test
