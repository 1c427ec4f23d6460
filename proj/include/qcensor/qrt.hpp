#pragma once

// Free-state membership tests for the five implemented resource theories and
// the two-qubit locality witnesses.

#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcensor/errors.hpp"
#include "qcensor/linalg.hpp"
#include "qcensor/states.hpp"

namespace qcensor {

enum class Theory { coherence, imaginarity, entanglement, discord, locality };

/// How free states of a theory combine on composite systems.
enum class Structure { affine, convex, nonconvex, activatable };

inline constexpr std::array<Theory, 5> kAllTheories = {Theory::coherence, Theory::imaginarity, Theory::entanglement,
                                                       Theory::discord, Theory::locality};

[[nodiscard]] inline std::string_view to_string(Theory t) {
  switch (t) {
    case Theory::coherence: return "coherence";
    case Theory::imaginarity: return "imaginarity";
    case Theory::entanglement: return "entanglement";
    case Theory::discord: return "discord";
    case Theory::locality: return "locality";
  }
  return "?";
}

[[nodiscard]] inline std::string_view to_string(Structure s) {
  switch (s) {
    case Structure::affine: return "affine";
    case Structure::convex: return "convex";
    case Structure::nonconvex: return "nonconvex";
    case Structure::activatable: return "activatable";
  }
  return "?";
}

[[nodiscard]] inline Theory parse_theory(std::string_view name) {
  for (Theory t : kAllTheories) {
    if (to_string(t) == name) return t;
  }
  throw DomainError("unknown resource theory '" + std::string(name) +
                    "' (expected coherence, imaginarity, entanglement, discord or locality)");
}

[[nodiscard]] inline Structure structure_of(Theory t) {
  switch (t) {
    case Theory::coherence:
    case Theory::imaginarity: return Structure::affine;
    case Theory::entanglement: return Structure::convex;
    case Theory::discord: return Structure::nonconvex;
    case Theory::locality: return Structure::activatable;
  }
  return Structure::nonconvex;
}

struct ResourceVerdict {
  bool is_free = true;
  double witness_value = 0.0;
  /// false only for necessary-but-not-sufficient tests.
  bool decisive = true;
  std::string witness;  // what witness_value measures
};

inline constexpr double kTolFree = 1e-9;

[[nodiscard]] inline ResourceVerdict is_free_coherence(const DensityOperator& rho, double tol = kTolFree) {
  const Matrix& m = rho.matrix();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j) worst = std::max(worst, std::abs(m(i, j)));
  return {worst <= tol, worst, true, "max |off-diagonal entry|"};
}

[[nodiscard]] inline ResourceVerdict is_free_imaginarity(const DensityOperator& rho, double tol = kTolFree) {
  const double worst = rho.matrix().imag().cwiseAbs().maxCoeff();
  return {worst <= tol, worst, true, "max |imaginary part|"};
}

namespace detail {

inline bool ppt_is_decisive(std::size_t da, std::size_t db) {
  const std::size_t lo = std::min(da, db);
  const std::size_t hi = std::max(da, db);
  return lo == 2 && hi <= 3;
}

}  // namespace detail

/// PPT test across the cut (`side_a` | rest). The witness is the minimum
/// eigenvalue of the partial transpose on `side_a`.
[[nodiscard]] inline ResourceVerdict is_free_entanglement(const DensityOperator& rho,
                                                          const std::vector<std::size_t>& side_a,
                                                          double tol = kTolFree) {
  const DimSignature& sig = rho.signature();
  if (sig.size() < 2) throw DimensionError("entanglement test needs at least two subsystems");
  if (side_a.empty() || side_a.size() >= sig.size()) throw DimensionError("bipartition must leave both sides non-empty");
  std::vector<bool> in_a(sig.size(), false);
  std::size_t da = 1;
  for (std::size_t k : side_a) {
    detail::require_subsystem(sig, k);
    if (in_a[k]) throw DimensionError("bipartition repeats a subsystem");
    in_a[k] = true;
    da *= sig[k];
  }
  const std::size_t db = sig.total() / da;
  const double w = min_eigenvalue(partial_transpose(rho.matrix(), sig, side_a));
  const bool ppt = w >= -tol;
  return {ppt, w, !ppt || detail::ppt_is_decisive(da, db), "min eigenvalue of partial transpose"};
}

/// Two-party shorthand: cut between factor 0 and factor 1.
[[nodiscard]] inline ResourceVerdict is_free_entanglement(const DensityOperator& rho, double tol = kTolFree) {
  if (rho.signature().size() != 2) throw DimensionError("single-cut entanglement test needs exactly two subsystems");
  return is_free_entanglement(rho, std::vector<std::size_t>{0}, tol);
}

/// Every bipartition of the tensor factors (each counted once).
[[nodiscard]] inline std::vector<std::vector<std::size_t>> all_bipartitions(std::size_t factors) {
  std::vector<std::vector<std::size_t>> cuts;
  if (factors < 2) return cuts;
  if (factors > 16) throw UnsupportedError("too many subsystems to enumerate bipartitions");
  // Subsets containing factor 0, excluding the full set.
  const std::uint32_t limit = 1u << (factors - 1);
  for (std::uint32_t mask = 0; mask + 1 < limit; ++mask) {
    std::vector<std::size_t> side{0};
    for (std::size_t k = 1; k < factors; ++k)
      if (mask & (1u << (k - 1))) side.push_back(k);
    cuts.push_back(std::move(side));
  }
  return cuts;
}

/// PPT across every bipartition. Any NPT cut is decisive; an all-PPT result is
/// decisive only for a two-factor 2×2 or 2×3 system.
[[nodiscard]] inline ResourceVerdict is_free_entanglement_all_cuts(const DensityOperator& rho, double tol = kTolFree) {
  const DimSignature& sig = rho.signature();
  if (sig.size() < 2) return {true, 0.0, true, "single subsystem"};
  double worst = 0.0;
  bool first = true;
  for (const auto& cut : all_bipartitions(sig.size())) {
    const ResourceVerdict v = is_free_entanglement(rho, cut, tol);
    if (first || v.witness_value < worst) worst = v.witness_value;
    first = false;
  }
  const bool ppt = worst >= -tol;
  const bool decisive = !ppt || (sig.size() == 2 && detail::ppt_is_decisive(sig[0], sig[1]));
  return {ppt, worst, decisive, "min eigenvalue of partial transpose over all cuts"};
}

/// Blocks ⟨μ|_other ρ |ν⟩_other, operators on the `side` factor.
[[nodiscard]] inline std::vector<Matrix> conditional_blocks(const DensityOperator& rho, std::size_t side) {
  const DimSignature& sig = rho.signature();
  if (sig.size() != 2) throw DimensionError("conditional blocks need a bipartite state");
  detail::require_subsystem(sig, side);
  const std::size_t order[] = {side, 1 - side};
  const Matrix m = permute_subsystems(rho.matrix(), sig, order);
  const auto dc = static_cast<Eigen::Index>(sig[side]);
  const auto dq = static_cast<Eigen::Index>(sig[1 - side]);
  std::vector<Matrix> blocks;
  for (Eigen::Index mu = 0; mu < dq; ++mu) {
    for (Eigen::Index nu = 0; nu < dq; ++nu) {
      Matrix b(dc, dc);
      for (Eigen::Index a = 0; a < dc; ++a)
        for (Eigen::Index c = 0; c < dc; ++c) b(a, c) = m(a * dq + mu, c * dq + nu);
      blocks.push_back(std::move(b));
    }
  }
  return blocks;
}

/// Classical-quantum test on `classical_side`: ρ = Σ_a q_a |a⟩⟨a| ⊗ ω^a for some
/// orthonormal basis {|a⟩} iff the conditional blocks pairwise commute. The
/// family is closed under adjoints, so commutation also makes each block normal.
/// Witness: largest commutator entry.
[[nodiscard]] inline ResourceVerdict is_classical_quantum(const DensityOperator& rho, std::size_t classical_side,
                                                          double tol = 1e-8) {
  const DimSignature& sig = rho.signature();
  if (sig.size() != 2) throw DimensionError("classical-quantum test needs a bipartite state");
  if (sig[0] > 4 || sig[1] > 4) throw UnsupportedError("classical-quantum test supports at most 4 dimensions per side");
  const auto blocks = conditional_blocks(rho, classical_side);
  double worst = 0.0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (std::size_t j = i + 1; j < blocks.size(); ++j) {
      const Matrix comm = blocks[i] * blocks[j] - blocks[j] * blocks[i];
      worst = std::max(worst, comm.cwiseAbs().maxCoeff());
    }
  }
  return {worst <= tol, worst, true, "max commutator entry of conditional blocks"};
}

[[nodiscard]] inline Matrix pauli(int k) {
  Matrix s = Matrix::Zero(2, 2);
  switch (k) {
    case 0: s(0, 0) = s(1, 1) = 1.0; break;
    case 1: s(0, 1) = s(1, 0) = 1.0; break;
    case 2: s(0, 1) = Complex(0, -1); s(1, 0) = Complex(0, 1); break;
    case 3: s(0, 0) = 1.0; s(1, 1) = -1.0; break;
    default: throw DomainError("pauli index must be 0..3");
  }
  return s;
}

/// T_ij = Tr(ρ σ_i ⊗ σ_j) for i, j ∈ {x, y, z}.
[[nodiscard]] inline RealMatrix correlation_matrix(const DensityOperator& rho) {
  if (!(rho.signature() == DimSignature{2, 2})) throw DimensionError("correlation matrix needs a two-qubit state");
  RealMatrix t(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t(i, j) = (rho.matrix() * kron(pauli(i + 1), pauli(j + 1))).trace().real();
  return t;
}

/// Sum of the two largest eigenvalues of TᵀT; the CHSH inequality is violated iff M > 1.
[[nodiscard]] inline double chsh_parameter(const DensityOperator& rho) {
  const RealMatrix t = correlation_matrix(rho);
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(t.transpose() * t, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();  // ascending
  return ev(2) + ev(1);
}

[[nodiscard]] inline ResourceVerdict is_free_locality(const DensityOperator& rho, double tol = kTolFree) {
  const double m = chsh_parameter(rho);
  // M ≤ 1 only rules out CHSH violations, not every Bell inequality.
  const bool local = m <= 1.0 + tol;
  return {local, m, !local, "CHSH parameter M"};
}

/// Exact non-negative rational with 128-bit parts.
struct Rational {
  unsigned __int128 num = 0;
  unsigned __int128 den = 1;

  static Rational make(unsigned __int128 n, unsigned __int128 d) {
    if (d == 0) throw DomainError("rational with zero denominator");
    unsigned __int128 a = n, b = d;
    while (b != 0) {
      const unsigned __int128 r = a % b;
      a = b;
      b = r;
    }
    return {n / a, d / a};
  }

  [[nodiscard]] double value() const {
    return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
  }

  [[nodiscard]] std::string str() const {
    auto digits = [](unsigned __int128 v) {
      if (v == 0) return std::string("0");
      std::string s;
      while (v > 0) {
        s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
      }
      return s;
    };
    return digits(num) + "/" + digits(den);
  }

  friend bool operator==(const Rational& a, const Rational& b) { return a.num == b.num && a.den == b.den; }
};

struct LocalityWindow {
  double lower = 0.0;
  double upper = 0.0;
  std::optional<Rational> lower_exact;
  std::optional<Rational> upper_exact;
};

/// Isotropic states with lower < p ≤ upper are entangled yet admit a local model:
/// lower = 1/(1+d), upper = (3d−1)(d−1)^{d−1} / ((d+1) d^d).
/// Exact fractions are provided while they fit in 128 bits (d ≤ 24).
[[nodiscard]] inline LocalityWindow isotropic_local_range(std::size_t d) {
  if (d < 2) throw DomainError("isotropic_local_range: d must be >= 2");
  LocalityWindow w;
  const auto dd = static_cast<double>(d);
  w.lower = 1.0 / (1.0 + dd);
  w.upper = std::exp(std::log(3.0 * dd - 1.0) + (dd - 1.0) * std::log(dd - 1.0) - std::log(dd + 1.0) - dd * std::log(dd));
  if (d <= 24) {
    using u128 = unsigned __int128;
    u128 num = 3 * d - 1;
    u128 den = d + 1;
    for (std::size_t k = 0; k + 1 < d; ++k) num *= d - 1;
    for (std::size_t k = 0; k < d; ++k) den *= d;
    w.lower_exact = Rational::make(1, d + 1);
    w.upper_exact = Rational::make(num, den);
    w.lower = w.lower_exact->value();
    w.upper = w.upper_exact->value();
  }
  return w;
}

using Povm = std::vector<Matrix>;

inline void validate_povm(const Povm& povm, std::size_t d, double tol = 1e-9) {
  if (povm.empty()) throw DomainError("POVM has no elements");
  const auto n = static_cast<Eigen::Index>(d);
  Matrix sum = Matrix::Zero(n, n);
  for (const Matrix& e : povm) {
    if (e.rows() != n || e.cols() != n) throw DimensionError("POVM element has wrong dimension");
    if (hermiticity_defect(e) > tol || min_eigenvalue(e) < -tol) throw DomainError("POVM element is not positive");
    sum += e;
  }
  if (max_abs_diff(sum, Matrix::Identity(n, n)) > tol) throw DomainError("POVM elements do not sum to identity");
}

/// p(a, b) = Tr(ρ (M_a ⊗ N_b)) for a bipartite ρ.
[[nodiscard]] inline RealMatrix born_probabilities(const DensityOperator& rho, const Povm& povm_x, const Povm& povm_y) {
  const DimSignature& sig = rho.signature();
  if (sig.size() != 2) throw DimensionError("born_probabilities needs a bipartite state");
  validate_povm(povm_x, sig[0]);
  validate_povm(povm_y, sig[1]);
  RealMatrix p(static_cast<Eigen::Index>(povm_x.size()), static_cast<Eigen::Index>(povm_y.size()));
  for (std::size_t a = 0; a < povm_x.size(); ++a)
    for (std::size_t b = 0; b < povm_y.size(); ++b)
      p(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          (rho.matrix() * kron(povm_x[a], povm_y[b])).trace().real();
  return p;
}

}  // namespace qcensor
