#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qcensor/errors.hpp"
#include "qcensor/linalg.hpp"
#include "qcensor/random.hpp"

namespace qcensor {

struct ValidityReport {
  double hermiticity_defect = 0.0;
  double min_eigenvalue = 0.0;
  double trace_deviation = 0.0;
  bool finite = true;
  bool hermitian = true;
  bool positive = true;
  bool unit_trace = true;

  [[nodiscard]] bool valid() const { return finite && hermitian && positive && unit_trace; }

  [[nodiscard]] std::string summary() const {
    return "hermiticity defect " + std::to_string(hermiticity_defect) + ", min eigenvalue " +
           std::to_string(min_eigenvalue) + ", trace deviation " + std::to_string(trace_deviation);
  }
};

/// Reports how far a matrix is from being a density operator. Never throws on
/// square input; the verdict is carried by the report.
[[nodiscard]] inline ValidityReport validate(const Matrix& m, double tol = kTolPsd) {
  if (m.rows() != m.cols()) throw DimensionError("validate: operator is not square");
  ValidityReport r;
  r.finite = all_finite(m);
  if (!r.finite) {
    r.hermitian = r.positive = r.unit_trace = false;
    return r;
  }
  r.hermiticity_defect = hermiticity_defect(m);
  r.hermitian = r.hermiticity_defect <= kTolHerm;
  const Matrix h = 0.5 * (m + m.adjoint());
  r.min_eigenvalue = m.size() ? min_eigenvalue(h) : 0.0;
  r.positive = r.min_eigenvalue >= -tol;
  r.trace_deviation = std::abs(m.trace() - Complex(1.0, 0.0));
  r.unit_trace = r.trace_deviation <= tol;
  return r;
}

/// A positive semidefinite, unit-trace operator together with its subsystem
/// structure. Construction validates; instances are always valid states.
class DensityOperator {
 public:
  DensityOperator(Matrix m, DimSignature sig) : matrix_(std::move(m)), sig_(std::move(sig)) {
    detail::require_square_matching(matrix_, sig_);
    const ValidityReport r = validate(matrix_);
    if (!r.valid()) throw InvalidStateError("not a density operator: " + r.summary());
  }

  [[nodiscard]] const Matrix& matrix() const { return matrix_; }
  [[nodiscard]] const DimSignature& signature() const { return sig_; }
  [[nodiscard]] std::size_t dim() const { return sig_.total(); }
  [[nodiscard]] ValidityReport validity() const { return validate(matrix_); }

  [[nodiscard]] double purity() const { return (matrix_ * matrix_).trace().real(); }

  [[nodiscard]] DensityOperator marginal(std::span<const std::size_t> keep) const {
    std::vector<std::size_t> sorted(keep.begin(), keep.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> dims;
    for (std::size_t k : sorted) dims.push_back(sig_.dims().at(k));
    return DensityOperator(partial_trace(matrix_, sig_, sorted), DimSignature(dims));
  }

  [[nodiscard]] DensityOperator marginal(std::initializer_list<std::size_t> keep) const {
    return marginal(std::span<const std::size_t>(keep.begin(), keep.size()));
  }

 private:
  Matrix matrix_;
  DimSignature sig_;
};

[[nodiscard]] inline DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator(kron(a.matrix(), b.matrix()), a.signature().concat(b.signature()));
}

[[nodiscard]] inline DensityOperator tensor_power(const DensityOperator& a, std::size_t n) {
  if (n == 0) throw DomainError("tensor_power: n must be >= 1");
  DensityOperator out = a;
  for (std::size_t k = 1; k < n; ++k) out = tensor(out, a);
  return out;
}

/// Convex combination Σ w_k ρ_k; all states must share one signature.
[[nodiscard]] inline DensityOperator mixture(const std::vector<double>& weights,
                                             const std::vector<DensityOperator>& states) {
  if (weights.size() != states.size() || states.empty()) throw DimensionError("mixture: size mismatch");
  Matrix acc = Matrix::Zero(states[0].matrix().rows(), states[0].matrix().cols());
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (!(states[k].signature() == states[0].signature())) throw DimensionError("mixture: signature mismatch");
    if (weights[k] < 0.0) throw DomainError("mixture: negative weight");
    acc += weights[k] * states[k].matrix();
  }
  return DensityOperator(std::move(acc), states[0].signature());
}

struct PureState {
  Vector amplitudes;
  DimSignature sig;
};

[[nodiscard]] inline Vector basis_ket(std::size_t d, std::size_t index) {
  if (index >= d) throw DimensionError("basis_ket: index out of range");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(d));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return v;
}

[[nodiscard]] inline Vector plus_ket() {
  return (basis_ket(2, 0) + basis_ket(2, 1)) / std::sqrt(2.0);
}

[[nodiscard]] inline Vector minus_ket() {
  return (basis_ket(2, 0) - basis_ket(2, 1)) / std::sqrt(2.0);
}

[[nodiscard]] inline DensityOperator from_pure(const PureState& psi) {
  if (static_cast<std::size_t>(psi.amplitudes.size()) != psi.sig.total()) {
    throw DimensionError("from_pure: amplitude count does not match signature " + psi.sig.str());
  }
  const double norm = psi.amplitudes.norm();
  if (std::abs(norm - 1.0) > 1e-6) {
    throw InvalidStateError("from_pure: state norm deviates from 1 by " + std::to_string(std::abs(norm - 1.0)));
  }
  const Vector v = psi.amplitudes / norm;
  return DensityOperator(v * v.adjoint(), psi.sig);
}

[[nodiscard]] inline DensityOperator from_pure(const Vector& amplitudes) {
  return from_pure(PureState{amplitudes, DimSignature::single(static_cast<std::size_t>(amplitudes.size()))});
}

[[nodiscard]] inline DensityOperator maximally_mixed(const DimSignature& sig) {
  const auto d = static_cast<Eigen::Index>(sig.total());
  return DensityOperator(Matrix::Identity(d, d) / static_cast<double>(d), sig);
}

[[nodiscard]] inline DensityOperator diagonal_state(const std::vector<double>& probabilities) {
  const auto d = static_cast<Eigen::Index>(probabilities.size());
  Matrix m = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) m(i, i) = probabilities[static_cast<std::size_t>(i)];
  return DensityOperator(std::move(m), DimSignature::single(probabilities.size()));
}

/// |φ⁺⟩ = d^{-1/2} Σ_a |aa⟩ as a vector on C^d ⊗ C^d.
[[nodiscard]] inline Vector phi_plus_ket(std::size_t d) {
  if (d < 2) throw DomainError("phi_plus: d must be >= 2");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(d * d));
  for (std::size_t a = 0; a < d; ++a) v(static_cast<Eigen::Index>(a * d + a)) = 1.0;
  return v / std::sqrt(static_cast<double>(d));
}

[[nodiscard]] inline DensityOperator bell_phi_plus(std::size_t d) {
  const Vector v = phi_plus_ket(d);
  return DensityOperator(v * v.adjoint(), DimSignature{d, d});
}

/// p·φ⁺ + (1−p)·I/d² for p in [0, 1].
[[nodiscard]] inline DensityOperator isotropic(std::size_t d, double p) {
  if (d < 2) throw DomainError("isotropic: d must be >= 2");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("isotropic: p must lie in [0, 1], got " + std::to_string(p));
  const Vector v = phi_plus_ket(d);
  const auto n = static_cast<Eigen::Index>(d * d);
  Matrix m = p * (v * v.adjoint()) + (1.0 - p) * Matrix::Identity(n, n) / static_cast<double>(n);
  return DensityOperator(std::move(m), DimSignature{d, d});
}

[[nodiscard]] inline Matrix ginibre(std::size_t rows, std::size_t cols, Rng& rng, bool real = false) {
  Matrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      const double re = rng.normal();
      const double im = real ? 0.0 : rng.normal();
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

/// Ginibre-ensemble state G G† / Tr(G G†) with G of shape dim × rank.
[[nodiscard]] inline DensityOperator random_density(const DimSignature& sig, std::size_t rank, Rng& rng,
                                                    bool real = false) {
  const std::size_t dim = sig.total();
  if (rank < 1 || rank > dim) throw DomainError("random_density: rank must lie in [1, dim]");
  const Matrix g = ginibre(dim, rank, rng, real);
  Matrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityOperator(std::move(m), sig);
}

[[nodiscard]] inline DensityOperator random_density(std::size_t dim, std::size_t rank, Rng& rng) {
  return random_density(DimSignature::single(dim), rank, rng);
}

[[nodiscard]] inline DensityOperator random_real_density(const DimSignature& sig, std::size_t rank, Rng& rng) {
  return random_density(sig, rank, rng, true);
}

[[nodiscard]] inline Vector random_ket(std::size_t dim, Rng& rng) {
  Vector v = ginibre(dim, 1, rng).col(0);
  return v / v.norm();
}

/// Haar-distributed unitary via QR of a Ginibre matrix with phase correction.
[[nodiscard]] inline Matrix random_unitary(std::size_t dim, Rng& rng) {
  const Matrix g = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < q.cols(); ++i) {
    const Complex diag = r(i, i);
    if (std::abs(diag) > 0.0) q.col(i) *= diag / std::abs(diag);
  }
  return q;
}

}  // namespace qcensor
