#pragma once

// Quantum channels in Kraus form, general (possibly non-CP) linear maps as
// transfer matrices, and Choi-matrix analysis.
//
// Conventions used throughout the library:
//   * vec() is row-major: vec(X)[i*d + j] = X(i, j), so vec(A X B) = (A ⊗ Bᵀ) vec(X).
//   * Choi matrix C = Σ_ij Λ(|i⟩⟨j|) ⊗ |i⟩⟨j|, unnormalized (trace = d_in),
//     output factor first.

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qcensor/errors.hpp"
#include "qcensor/linalg.hpp"
#include "qcensor/states.hpp"

namespace qcensor {

/// Tolerance on Σ K†K = I accepted at construction.
inline constexpr double kTolTracePreserving = 1e-9;

class KrausChannel {
 public:
  KrausChannel(std::vector<Matrix> ops, DimSignature in, DimSignature out)
      : ops_(std::move(ops)), in_(std::move(in)), out_(std::move(out)) {
    if (ops_.empty()) throw DimensionError("KrausChannel: no Kraus operators");
    for (const Matrix& k : ops_) {
      if (static_cast<std::size_t>(k.cols()) != in_.total() || static_cast<std::size_t>(k.rows()) != out_.total()) {
        throw DimensionError("KrausChannel: operator shape does not match " + in_.str() + " -> " + out_.str());
      }
      require_finite(k);
    }
    const double defect = trace_preservation_defect();
    if (defect > kTolTracePreserving) {
      throw DomainError("KrausChannel: not trace preserving (defect " + std::to_string(defect) + ")");
    }
  }

  KrausChannel(std::vector<Matrix> ops, DimSignature sig) : KrausChannel(std::move(ops), sig, sig) {}

  [[nodiscard]] const std::vector<Matrix>& ops() const { return ops_; }
  [[nodiscard]] const DimSignature& input() const { return in_; }
  [[nodiscard]] const DimSignature& output() const { return out_; }

  /// max |Σ K†K − I|.
  [[nodiscard]] double trace_preservation_defect() const {
    const auto d = static_cast<Eigen::Index>(in_.total());
    Matrix acc = Matrix::Zero(d, d);
    for (const Matrix& k : ops_) acc += k.adjoint() * k;
    return max_abs_diff(acc, Matrix::Identity(d, d));
  }

  [[nodiscard]] Matrix apply(const Matrix& rho) const {
    if (static_cast<std::size_t>(rho.rows()) != in_.total() || rho.rows() != rho.cols()) {
      throw DimensionError("KrausChannel::apply: input dimension mismatch");
    }
    const auto d = static_cast<Eigen::Index>(out_.total());
    Matrix acc = Matrix::Zero(d, d);
    for (const Matrix& k : ops_) acc.noalias() += k * rho * k.adjoint();
    return acc;
  }

  [[nodiscard]] DensityOperator apply(const DensityOperator& rho) const {
    if (!(rho.signature().total() == in_.total())) throw DimensionError("KrausChannel::apply: dimension mismatch");
    return DensityOperator(apply(rho.matrix()), out_);
  }

 private:
  std::vector<Matrix> ops_;
  DimSignature in_;
  DimSignature out_;
};

/// Applies `ch` to the consecutive factors [first, first + ch.input().size())
/// of an operator on `sig`; returns the operator and its new signature.
[[nodiscard]] inline std::pair<Matrix, DimSignature> apply_on_factors(const KrausChannel& ch, const Matrix& rho,
                                                                     const DimSignature& sig, std::size_t first) {
  detail::require_square_matching(rho, sig);
  const std::size_t count = ch.input().size();
  if (!(sig.slice(first, count) == ch.input())) {
    throw DimensionError("apply_on_factors: channel input " + ch.input().str() + " does not match factors of " +
                         sig.str());
  }
  std::size_t left = 1;
  for (std::size_t k = 0; k < first; ++k) left *= sig[k];
  std::size_t right = 1;
  for (std::size_t k = first + count; k < sig.size(); ++k) right *= sig[k];

  std::vector<std::size_t> dims(sig.dims().begin(), sig.dims().begin() + static_cast<std::ptrdiff_t>(first));
  dims.insert(dims.end(), ch.output().dims().begin(), ch.output().dims().end());
  dims.insert(dims.end(), sig.dims().begin() + static_cast<std::ptrdiff_t>(first + count), sig.dims().end());
  DimSignature out_sig(std::move(dims));

  const auto l = static_cast<Eigen::Index>(left);
  const auto r = static_cast<Eigen::Index>(right);
  const Matrix id_left = Matrix::Identity(l, l);
  const Matrix id_right = Matrix::Identity(r, r);
  const auto n = static_cast<Eigen::Index>(out_sig.total());
  Matrix acc = Matrix::Zero(n, n);
  for (const Matrix& k : ch.ops()) {
    const Matrix big = kron(id_left, kron(k, id_right));
    acc.noalias() += big * rho * big.adjoint();
  }
  return {std::move(acc), std::move(out_sig)};
}

/// Linear map on operators, stored as its transfer matrix acting on row-major
/// vec(). Used for maps that have no Kraus form.
class LinearMap {
 public:
  LinearMap(Matrix transfer, std::size_t in_dim, std::size_t out_dim)
      : transfer_(std::move(transfer)), in_dim_(in_dim), out_dim_(out_dim) {
    if (static_cast<std::size_t>(transfer_.cols()) != in_dim * in_dim ||
        static_cast<std::size_t>(transfer_.rows()) != out_dim * out_dim) {
      throw DimensionError("LinearMap: transfer matrix shape does not match dimensions");
    }
  }

  [[nodiscard]] const Matrix& transfer() const { return transfer_; }
  [[nodiscard]] std::size_t in_dim() const { return in_dim_; }
  [[nodiscard]] std::size_t out_dim() const { return out_dim_; }

  [[nodiscard]] Matrix apply(const Matrix& x) const {
    if (static_cast<std::size_t>(x.rows()) != in_dim_ || x.rows() != x.cols()) {
      throw DimensionError("LinearMap::apply: input dimension mismatch");
    }
    const auto din = static_cast<Eigen::Index>(in_dim_);
    const auto dout = static_cast<Eigen::Index>(out_dim_);
    Vector v(din * din);
    for (Eigen::Index i = 0; i < din; ++i)
      for (Eigen::Index j = 0; j < din; ++j) v(i * din + j) = x(i, j);
    const Vector w = transfer_ * v;
    Matrix out(dout, dout);
    for (Eigen::Index i = 0; i < dout; ++i)
      for (Eigen::Index j = 0; j < dout; ++j) out(i, j) = w(i * dout + j);
    return out;
  }

  /// The output of a non-CP map need not be a state, so a plain matrix is returned.
  [[nodiscard]] Matrix apply(const DensityOperator& rho) const { return apply(rho.matrix()); }

 private:
  Matrix transfer_;
  std::size_t in_dim_;
  std::size_t out_dim_;
};

[[nodiscard]] inline LinearMap to_linear_map(const KrausChannel& ch) {
  const auto din = static_cast<Eigen::Index>(ch.input().total());
  const auto dout = static_cast<Eigen::Index>(ch.output().total());
  Matrix t = Matrix::Zero(dout * dout, din * din);
  for (const Matrix& k : ch.ops()) t += kron(k, Matrix(k.conjugate()));
  return LinearMap(std::move(t), ch.input().total(), ch.output().total());
}

/// Affine combination Σ w_k Λ_k of maps with equal dimensions.
[[nodiscard]] inline LinearMap combine(const std::vector<double>& weights, const std::vector<LinearMap>& maps) {
  if (weights.size() != maps.size() || maps.empty()) throw DimensionError("combine: size mismatch");
  Matrix t = Matrix::Zero(maps[0].transfer().rows(), maps[0].transfer().cols());
  for (std::size_t k = 0; k < maps.size(); ++k) {
    if (maps[k].in_dim() != maps[0].in_dim() || maps[k].out_dim() != maps[0].out_dim()) {
      throw DimensionError("combine: dimension mismatch");
    }
    t += weights[k] * maps[k].transfer();
  }
  return LinearMap(std::move(t), maps[0].in_dim(), maps[0].out_dim());
}

struct ChoiMatrix {
  Matrix matrix;  // on output ⊗ input
  std::size_t out_dim;
  std::size_t in_dim;

  /// max |Tr_out C − I_in|.
  [[nodiscard]] double trace_preservation_defect() const {
    const Matrix reduced = partial_trace(matrix, DimSignature{out_dim, in_dim}, {1});
    const auto d = static_cast<Eigen::Index>(in_dim);
    return max_abs_diff(reduced, Matrix::Identity(d, d));
  }
};

[[nodiscard]] inline ChoiMatrix choi(const LinearMap& map) {
  const auto din = static_cast<Eigen::Index>(map.in_dim());
  const auto dout = static_cast<Eigen::Index>(map.out_dim());
  Matrix c = Matrix::Zero(dout * din, dout * din);
  for (Eigen::Index i = 0; i < din; ++i) {
    for (Eigen::Index j = 0; j < din; ++j) {
      Matrix unit = Matrix::Zero(din, din);
      unit(i, j) = 1.0;
      c += kron(map.apply(unit), unit);
    }
  }
  return ChoiMatrix{std::move(c), map.out_dim(), map.in_dim()};
}

[[nodiscard]] inline ChoiMatrix choi(const KrausChannel& ch) { return choi(to_linear_map(ch)); }

[[nodiscard]] inline bool is_completely_positive(const LinearMap& map, double tol = kTolPsd) {
  const ChoiMatrix c = choi(map);
  // A Hermiticity-violating Choi matrix means the map is not even Hermiticity preserving.
  if (hermiticity_defect(c.matrix) > kTolHerm) return false;
  return is_positive_semidefinite(c.matrix, tol);
}

[[nodiscard]] inline KrausChannel identity_channel(const DimSignature& sig) {
  const auto d = static_cast<Eigen::Index>(sig.total());
  return KrausChannel({Matrix::Identity(d, d)}, sig);
}

[[nodiscard]] inline KrausChannel identity_channel(std::size_t d) { return identity_channel(DimSignature::single(d)); }

/// Dephasing in the orthonormal basis given by the columns of `basis`:
/// ρ ↦ Σ_a |b_a⟩⟨b_a| ρ |b_a⟩⟨b_a|.
[[nodiscard]] inline KrausChannel dephasing_channel(const Matrix& basis, const DimSignature& sig) {
  if (basis.rows() != basis.cols() || static_cast<std::size_t>(basis.rows()) != sig.total()) {
    throw DimensionError("dephasing_channel: basis shape does not match " + sig.str());
  }
  const auto d = basis.rows();
  const double defect = max_abs_diff(basis.adjoint() * basis, Matrix::Identity(d, d));
  if (defect > 1e-9) throw DomainError("dephasing_channel: basis is not orthonormal (defect " + std::to_string(defect) + ")");
  std::vector<Matrix> ops;
  ops.reserve(static_cast<std::size_t>(d));
  for (Eigen::Index a = 0; a < d; ++a) ops.emplace_back(basis.col(a) * basis.col(a).adjoint());
  return KrausChannel(std::move(ops), sig);
}

[[nodiscard]] inline KrausChannel dephasing_channel(const Matrix& basis) {
  return dephasing_channel(basis, DimSignature::single(static_cast<std::size_t>(basis.rows())));
}

[[nodiscard]] inline KrausChannel computational_dephasing(const DimSignature& sig) {
  const auto d = static_cast<Eigen::Index>(sig.total());
  return dephasing_channel(Matrix::Identity(d, d), sig);
}

/// ρ ↦ Tr(ρ)·σ built from a pure-state decomposition σ = Σ_k w_k |v_k⟩⟨v_k|,
/// with rank-one Kraus operators √w_k |v_k⟩⟨i|.
[[nodiscard]] inline KrausChannel replacement_channel(const std::vector<double>& weights,
                                                      const std::vector<Vector>& vectors,
                                                      const DimSignature& in, const DimSignature& out) {
  if (weights.size() != vectors.size() || weights.empty()) throw DimensionError("replacement_channel: size mismatch");
  const auto din = static_cast<Eigen::Index>(in.total());
  std::vector<Matrix> ops;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] < 0.0) throw DomainError("replacement_channel: negative weight");
    if (weights[k] == 0.0) continue;
    if (static_cast<std::size_t>(vectors[k].size()) != out.total()) throw DimensionError("replacement_channel: vector size");
    for (Eigen::Index i = 0; i < din; ++i) {
      Matrix op = Matrix::Zero(static_cast<Eigen::Index>(out.total()), din);
      op.col(i) = std::sqrt(weights[k]) * vectors[k];
      ops.push_back(std::move(op));
    }
  }
  return KrausChannel(std::move(ops), in, out);
}

/// ρ ↦ Tr(ρ)·σ with Kraus operators √λ_a |σ^a⟩⟨i| from the spectral resolution of σ.
[[nodiscard]] inline KrausChannel replacement_channel(const DensityOperator& sigma, const DimSignature& in) {
  const EigenDecomposition eig = hermitian_eig(sigma.matrix());
  std::vector<double> weights;
  std::vector<Vector> vectors;
  for (Eigen::Index a = 0; a < eig.values.size(); ++a) {
    if (eig.values(a) <= 0.0) continue;
    weights.push_back(eig.values(a));
    vectors.emplace_back(eig.vectors.col(a));
  }
  // Renormalize away the eigensolver's trace drift so the channel is exactly trace preserving.
  double total = 0.0;
  for (double w : weights) total += w;
  for (double& w : weights) w /= total;
  return replacement_channel(weights, vectors, in, sigma.signature());
}

[[nodiscard]] inline KrausChannel replacement_channel(const DensityOperator& sigma) {
  return replacement_channel(sigma, sigma.signature());
}

/// ρ ↦ (1−s)ρ + s·I/d.
[[nodiscard]] inline KrausChannel depolarizing(const DimSignature& sig, double strength) {
  if (!(strength >= 0.0 && strength <= 1.0)) throw DomainError("depolarizing: strength must lie in [0, 1]");
  const auto d = static_cast<Eigen::Index>(sig.total());
  std::vector<Matrix> ops;
  if (strength < 1.0) ops.emplace_back(std::sqrt(1.0 - strength) * Matrix::Identity(d, d));
  if (strength > 0.0) {
    const double c = std::sqrt(strength / static_cast<double>(d));
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        Matrix op = Matrix::Zero(d, d);
        op(i, j) = c;
        ops.push_back(std::move(op));
      }
    }
  }
  return KrausChannel(std::move(ops), sig);
}

[[nodiscard]] inline KrausChannel depolarizing(std::size_t d, double strength) {
  return depolarizing(DimSignature::single(d), strength);
}

/// Qubit amplitude damping with decay probability γ.
[[nodiscard]] inline KrausChannel amplitude_damping(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("amplitude_damping: gamma must lie in [0, 1]");
  Matrix k0 = Matrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  Matrix k1 = Matrix::Zero(2, 2);
  k1(0, 1) = std::sqrt(gamma);
  return KrausChannel({k0, k1}, DimSignature::single(2));
}

/// X ↦ Xᵀ in the computational basis.
[[nodiscard]] inline LinearMap transpose_map(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  Matrix t = Matrix::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) t(j * n + i, i * n + j) = 1.0;
  return LinearMap(std::move(t), d, d);
}

/// X ↦ (X + Xᵀ)/2: destroys imaginarity but is not completely positive.
[[nodiscard]] inline LinearMap imaginarity_rd_map(std::size_t d = 2) {
  const auto n = static_cast<Eigen::Index>(d * d);
  const LinearMap transpose = transpose_map(d);
  return LinearMap(0.5 * (Matrix::Identity(n, n) + transpose.transfer()), d, d);
}

struct EntanglementBreakingVerdict {
  bool entanglement_breaking = false;
  /// false when only a necessary condition (PPT Choi beyond 2×2 / 2×3) was checked.
  bool decisive = false;
  std::string method;
  /// Minimum eigenvalue of the partially transposed (unnormalized) Choi matrix, when computed.
  double choi_pt_min_eigenvalue = 0.0;
};

[[nodiscard]] inline bool all_kraus_rank_one(const KrausChannel& ch, double tol = 1e-10) {
  for (const Matrix& k : ch.ops()) {
    Eigen::JacobiSVD<Matrix> svd(k);
    const auto& s = svd.singularValues();
    if (s.size() > 1 && s(1) > tol) return false;
  }
  return true;
}

[[nodiscard]] inline EntanglementBreakingVerdict is_entanglement_breaking(const KrausChannel& ch) {
  const ChoiMatrix c = choi(ch);
  const DimSignature choi_sig{c.out_dim, c.in_dim};
  const double pt_min = min_eigenvalue(partial_transpose(c.matrix, choi_sig, 1));

  if (all_kraus_rank_one(ch)) return {true, true, "rank-one Kraus operators", pt_min};

  const std::size_t lo = std::min(c.out_dim, c.in_dim);
  const std::size_t hi = std::max(c.out_dim, c.in_dim);
  const bool ppt_decisive = lo == 2 && hi <= 3;
  if (pt_min < -kTolPsd) return {false, true, "Choi matrix is NPT", pt_min};
  if (ppt_decisive) return {true, true, "Choi matrix is PPT (decisive in 2x2 / 2x3)", pt_min};
  return {true, false, "Choi matrix is PPT (necessary condition only)", pt_min};
}

}  // namespace qcensor
