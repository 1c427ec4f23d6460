#pragma once

// Dense complex linear algebra for small composite quantum systems.
//
// Operators are plain Eigen::MatrixXcd values. A DimSignature annotates how a
// matrix dimension factors into subsystems; subsystem 0 is the most
// significant tensor factor (row-major Kronecker convention).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "qcensor/errors.hpp"

namespace qcensor {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kTolHerm = 1e-9;
inline constexpr double kTolPsd = 1e-9;

// Eigenvalues closer than this are treated as one degenerate cluster when the
// eigenbasis is canonicalized.
inline constexpr double kDegeneracyTol = 1e-9;

class DimSignature {
 public:
  DimSignature() = default;

  explicit DimSignature(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    for (std::size_t d : dims_) {
      if (d < 2) {
        throw DimensionError("subsystem dimension must be >= 2, got " + std::to_string(d));
      }
    }
  }

  DimSignature(std::initializer_list<std::size_t> dims)
      : DimSignature(std::vector<std::size_t>(dims)) {}

  static DimSignature single(std::size_t d) { return DimSignature({d}); }

  /// `count` copies of a `d`-dimensional factor.
  static DimSignature uniform(std::size_t d, std::size_t count) {
    return DimSignature(std::vector<std::size_t>(count, d));
  }

  [[nodiscard]] const std::vector<std::size_t>& dims() const { return dims_; }
  [[nodiscard]] std::size_t size() const { return dims_.size(); }
  [[nodiscard]] bool empty() const { return dims_.empty(); }
  [[nodiscard]] std::size_t operator[](std::size_t i) const { return dims_.at(i); }

  [[nodiscard]] std::size_t total() const {
    return std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>());
  }

  [[nodiscard]] DimSignature concat(const DimSignature& other) const {
    std::vector<std::size_t> out = dims_;
    out.insert(out.end(), other.dims_.begin(), other.dims_.end());
    return DimSignature(std::move(out));
  }

  /// Factors [first, first + count).
  [[nodiscard]] DimSignature slice(std::size_t first, std::size_t count) const {
    if (first + count > dims_.size()) throw DimensionError("signature slice out of range");
    return DimSignature(std::vector<std::size_t>(dims_.begin() + static_cast<std::ptrdiff_t>(first),
                                                 dims_.begin() + static_cast<std::ptrdiff_t>(first + count)));
  }

  [[nodiscard]] std::string str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(dims_[i]);
    }
    return s + "]";
  }

  friend bool operator==(const DimSignature&, const DimSignature&) = default;

 private:
  std::vector<std::size_t> dims_;
};

namespace detail {

inline std::vector<std::size_t> strides_of(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) strides[k - 1] = strides[k] * dims[k];
  return strides;
}

inline void require_square_matching(const Matrix& m, const DimSignature& sig) {
  if (m.rows() != m.cols()) throw DimensionError("operator is not square");
  if (static_cast<std::size_t>(m.rows()) != sig.total()) {
    throw DimensionError("operator dimension " + std::to_string(m.rows()) +
                         " does not match signature " + sig.str());
  }
}

inline void require_subsystem(const DimSignature& sig, std::size_t k) {
  if (k >= sig.size()) {
    throw DimensionError("subsystem index " + std::to_string(k) + " out of range for " + sig.str());
  }
}

}  // namespace detail

[[nodiscard]] inline bool all_finite(const Matrix& m) {
  return m.allFinite();
}

inline void require_finite(const Matrix& m) {
  if (!all_finite(m)) throw DomainError("matrix has non-finite entries");
}

[[nodiscard]] inline Matrix kron(const Matrix& a, const Matrix& b) {
  require_finite(a);
  require_finite(b);
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

[[nodiscard]] inline Vector kron_ket(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// Largest entrywise deviation from Hermiticity.
[[nodiscard]] inline double hermiticity_defect(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("operator is not square");
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Reorders tensor factors: factor `order[k]` of the input becomes factor k of
/// the output.
[[nodiscard]] inline Matrix permute_subsystems(const Matrix& rho, const DimSignature& sig,
                                               std::span<const std::size_t> order) {
  detail::require_square_matching(rho, sig);
  const std::size_t n = sig.size();
  if (order.size() != n) throw DimensionError("permutation length does not match signature");
  std::vector<bool> seen(n, false);
  for (std::size_t k : order) {
    detail::require_subsystem(sig, k);
    if (seen[k]) throw DimensionError("permutation repeats a subsystem");
    seen[k] = true;
  }
  std::vector<std::size_t> new_dims(n);
  for (std::size_t k = 0; k < n; ++k) new_dims[k] = sig[order[k]];
  const auto old_strides = detail::strides_of(sig.dims());
  const auto new_strides = detail::strides_of(new_dims);

  const std::size_t total = sig.total();
  std::vector<Eigen::Index> map(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t target = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t digit = (idx / old_strides[order[k]]) % sig[order[k]];
      target += digit * new_strides[k];
    }
    map[idx] = static_cast<Eigen::Index>(target);
  }
  Matrix out(rho.rows(), rho.cols());
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = 0; j < total; ++j) {
      out(map[i], map[j]) = rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

/// Traces out every subsystem not listed in `keep`. Kept factors retain their
/// original relative order.
[[nodiscard]] inline Matrix partial_trace(const Matrix& rho, const DimSignature& sig,
                                          std::span<const std::size_t> keep) {
  detail::require_square_matching(rho, sig);
  std::vector<bool> kept(sig.size(), false);
  for (std::size_t k : keep) {
    detail::require_subsystem(sig, k);
    kept[k] = true;
  }
  std::vector<std::size_t> order;
  std::size_t keep_dim = 1;
  for (std::size_t k = 0; k < sig.size(); ++k) {
    if (kept[k]) {
      order.push_back(k);
      keep_dim *= sig[k];
    }
  }
  if (order.size() == sig.size()) return rho;
  for (std::size_t k = 0; k < sig.size(); ++k) {
    if (!kept[k]) order.push_back(k);
  }
  const Matrix permuted = permute_subsystems(rho, sig, order);
  const auto traced_dim = static_cast<Eigen::Index>(sig.total() / keep_dim);
  const auto kd = static_cast<Eigen::Index>(keep_dim);
  Matrix out = Matrix::Zero(kd, kd);
  for (Eigen::Index i = 0; i < kd; ++i) {
    for (Eigen::Index j = 0; j < kd; ++j) {
      Complex acc = 0.0;
      for (Eigen::Index t = 0; t < traced_dim; ++t) acc += permuted(i * traced_dim + t, j * traced_dim + t);
      out(i, j) = acc;
    }
  }
  return out;
}

[[nodiscard]] inline Matrix partial_trace(const Matrix& rho, const DimSignature& sig,
                                          std::initializer_list<std::size_t> keep) {
  return partial_trace(rho, sig, std::span<const std::size_t>(keep.begin(), keep.size()));
}

/// Transposes every listed tensor factor.
[[nodiscard]] inline Matrix partial_transpose(const Matrix& rho, const DimSignature& sig,
                                              std::span<const std::size_t> subsystems) {
  detail::require_square_matching(rho, sig);
  for (std::size_t k : subsystems) detail::require_subsystem(sig, k);
  const auto strides = detail::strides_of(sig.dims());
  const std::size_t total = sig.total();
  Matrix out(rho.rows(), rho.cols());
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = 0; j < total; ++j) {
      std::size_t ti = i;
      std::size_t tj = j;
      for (std::size_t k : subsystems) {
        const std::size_t di = (i / strides[k]) % sig[k];
        const std::size_t dj = (j / strides[k]) % sig[k];
        ti = ti - di * strides[k] + dj * strides[k];
        tj = tj - dj * strides[k] + di * strides[k];
      }
      out(static_cast<Eigen::Index>(ti), static_cast<Eigen::Index>(tj)) =
          rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

[[nodiscard]] inline Matrix partial_transpose(const Matrix& rho, const DimSignature& sig,
                                              std::size_t subsystem) {
  const std::size_t one[] = {subsystem};
  return partial_transpose(rho, sig, std::span<const std::size_t>(one));
}

struct EigenDecomposition {
  RealVector values;  // descending
  Matrix vectors;     // orthonormal columns, canonical phases
};

namespace detail {

// Index of the first entry whose magnitude is (numerically) the largest.
inline Eigen::Index leading_entry(const Vector& v) {
  const double max_abs = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= max_abs - 1e-12) return i;
  }
  return 0;
}

inline void canonicalize_phase(Vector& v) {
  const Complex lead = v(leading_entry(v));
  if (std::abs(lead) > 0.0) v *= std::conj(lead) / std::abs(lead);
  // remove the residual imaginary part of the leading entry
  const Eigen::Index k = leading_entry(v);
  v(k) = Complex(v(k).real(), 0.0);
}

inline bool lex_less(const Vector& a, const Vector& b) {
  constexpr double tol = 1e-10;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (std::abs(a(i).real() - b(i).real()) > tol) return a(i).real() < b(i).real();
    if (std::abs(a(i).imag() - b(i).imag()) > tol) return a(i).imag() < b(i).imag();
  }
  return false;
}

// Replaces a degenerate cluster's solver-dependent basis with one obtained by
// pivoted Gram-Schmidt on the projections of computational basis vectors.
inline std::vector<Vector> canonical_cluster_basis(const Matrix& cluster) {
  const Eigen::Index n = cluster.rows();
  const Eigen::Index k = cluster.cols();
  const Matrix projector = cluster * cluster.adjoint();
  std::vector<Vector> residuals;
  residuals.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) residuals.emplace_back(projector.col(i));

  std::vector<Vector> basis;
  for (Eigen::Index step = 0; step < k; ++step) {
    double best = -1.0;
    for (const auto& r : residuals) best = std::max(best, r.norm());
    std::size_t pick = 0;
    for (std::size_t i = 0; i < residuals.size(); ++i) {
      if (residuals[i].norm() >= best - 1e-10) {
        pick = i;
        break;
      }
    }
    Vector v = residuals[pick] / residuals[pick].norm();
    for (auto& r : residuals) r -= v * v.dot(r);
    canonicalize_phase(v);
    basis.push_back(std::move(v));
  }
  std::sort(basis.begin(), basis.end(), [](const Vector& a, const Vector& b) { return lex_less(b, a); });
  return basis;
}

}  // namespace detail

/// Eigendecomposition of a Hermitian matrix with a reproducible eigenbasis:
/// eigenvalues descending, each eigenvector phased so that its first
/// largest-magnitude entry is real positive, and degenerate eigenspaces spanned
/// by a basis that depends only on the eigenspace (decreasing lexicographic order,
/// so the computational basis stays in place).
[[nodiscard]] inline EigenDecomposition hermitian_eig(const Matrix& m, double tol_herm = kTolHerm) {
  require_finite(m);
  const double defect = hermiticity_defect(m);
  if (defect > tol_herm) {
    throw InvalidStateError("matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  }
  const Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) throw Error("Hermitian eigensolver did not converge");

  const Eigen::Index n = h.rows();
  EigenDecomposition out{RealVector(n), Matrix(n, n)};
  // Eigen returns ascending order.
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = solver.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }

  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && out.values(end - 1) - out.values(end) <= kDegeneracyTol) ++end;
    const Eigen::Index size = end - start;
    if (size == 1) {
      Vector v = out.vectors.col(start);
      detail::canonicalize_phase(v);
      out.vectors.col(start) = v;
    } else {
      const auto basis = detail::canonical_cluster_basis(out.vectors.middleCols(start, size));
      for (Eigen::Index c = 0; c < size; ++c) out.vectors.col(start + c) = basis[static_cast<std::size_t>(c)];
    }
    start = end;
  }
  return out;
}

[[nodiscard]] inline RealVector hermitian_eigenvalues(const Matrix& m, double tol_herm = kTolHerm) {
  require_finite(m);
  const double defect = hermiticity_defect(m);
  if (defect > tol_herm) {
    throw InvalidStateError("matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().reverse();
}

[[nodiscard]] inline double min_eigenvalue(const Matrix& m, double tol_herm = kTolHerm) {
  return hermitian_eigenvalues(m, tol_herm).minCoeff();
}

[[nodiscard]] inline bool is_positive_semidefinite(const Matrix& m, double tol = kTolPsd) {
  return min_eigenvalue(m) >= -tol;
}

/// Shannon entropy (nats) of a probability-like vector; non-positive entries contribute 0.
[[nodiscard]] inline double shannon_entropy(const RealVector& p) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) > 0.0) s -= p(i) * std::log(p(i));
  }
  return s;
}

/// Von Neumann entropy in nats.
[[nodiscard]] inline double von_neumann_entropy(const Matrix& rho) {
  return shannon_entropy(hermitian_eigenvalues(rho));
}

inline constexpr double nats_to_bits(double nats) { return nats / 0.69314718055994530942; }

[[nodiscard]] inline double hs_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("hs_distance: shape mismatch");
  return (a - b).norm();
}

[[nodiscard]] inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("shape mismatch");
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace qcensor
