#pragma once

// Two-qubit quantum discord with a projective measurement on one side.
//
// D(ρ) = I(ρ) − max_Π I(ρ′), where ρ′ is the post-measurement state. For a
// measurement {|n⟩, |n⊥⟩} on the measured side, I(ρ′) = S(ρ_other) − Σ_k p_k S(ω_k)
// with ω_k the conditional states of the other side.

#include <cmath>
#include <numbers>

#include "qcensor/errors.hpp"
#include "qcensor/linalg.hpp"
#include "qcensor/states.hpp"

namespace qcensor {

struct DiscordOptions {
  int grid_points = 60;
  int refine_iters = 50;
};

struct DiscordResult {
  double discord = 0.0;  // nats
  double mutual_information = 0.0;
  double classical_information = 0.0;  // best I(ρ′) found
  double theta = 0.0;
  double phi = 0.0;
};

namespace detail {

inline double entropy_2x2(const Matrix& m) {
  const double tr = m.trace().real();
  if (tr <= 0.0) return 0.0;
  const double a = m(0, 0).real() / tr;
  const double d = m(1, 1).real() / tr;
  const double off = std::norm(m(0, 1)) / (tr * tr);
  const double disc = std::sqrt(std::max(0.0, 0.25 * (a - d) * (a - d) + off));
  const double l1 = 0.5 * (a + d) + disc;
  const double l2 = 0.5 * (a + d) - disc;
  double s = 0.0;
  if (l1 > 0.0) s -= l1 * std::log(l1);
  if (l2 > 0.0) s -= l2 * std::log(l2);
  return s;
}

class DiscordObjective {
 public:
  DiscordObjective(const DensityOperator& rho, std::size_t side) {
    const std::size_t order[] = {side, 1 - side};
    rho_ = permute_subsystems(rho.matrix(), rho.signature(), order);
    const std::size_t other[] = {1};
    other_entropy_ = entropy_2x2(partial_trace(rho_, DimSignature{2, 2}, other));
  }

  /// I(ρ′) for the measurement basis {|n⟩, |n⊥⟩}, |n⟩ = (cos θ/2, e^{iφ} sin θ/2).
  [[nodiscard]] double operator()(double theta, double phi) const {
    const Complex c(std::cos(0.5 * theta), 0.0);
    const Complex s = std::polar(std::sin(0.5 * theta), phi);
    const Complex n[2][2] = {{c, s}, {-std::conj(s), std::conj(c)}};
    double conditional = 0.0;
    for (const auto& v : n) {
      // ω_k (unnormalized) = ⟨n_k| ρ |n_k⟩ on the other factor.
      Matrix omega = Matrix::Zero(2, 2);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          omega += std::conj(v[a]) * v[b] * rho_.block(2 * a, 2 * b, 2, 2);
      const double p = omega.trace().real();
      if (p > 1e-15) conditional += p * entropy_2x2(omega);
    }
    return other_entropy_ - conditional;
  }

 private:
  Matrix rho_;
  double other_entropy_ = 0.0;
};

}  // namespace detail

[[nodiscard]] inline double mutual_information(const DensityOperator& rho) {
  const DimSignature& sig = rho.signature();
  if (sig.size() != 2) throw DimensionError("mutual information needs a bipartite state");
  const std::size_t a[] = {0};
  const std::size_t b[] = {1};
  return von_neumann_entropy(partial_trace(rho.matrix(), sig, a)) +
         von_neumann_entropy(partial_trace(rho.matrix(), sig, b)) - von_neumann_entropy(rho.matrix());
}

/// Grid search over the Bloch sphere (θ ∈ [0, π] with grid_points samples,
/// φ ∈ [0, 2π) with grid_points − 1 samples) followed by coordinate descent with
/// a halving step. Nested grids give monotone results when refine_iters = 0.
[[nodiscard]] inline DiscordResult discord_details(const DensityOperator& rho, std::size_t measured_side = 0,
                                                   const DiscordOptions& opt = {}) {
  if (!(rho.signature() == DimSignature{2, 2})) throw UnsupportedError("discord is implemented for two qubits only");
  if (measured_side > 1) throw DimensionError("measured side must be 0 or 1");
  if (opt.grid_points < 2) throw DomainError("discord grid needs at least 2 points per angle");
  if (opt.refine_iters < 0) throw DomainError("refine_iters must be non-negative");

  const detail::DiscordObjective objective(rho, measured_side);
  const int n = opt.grid_points;
  const double dtheta = std::numbers::pi / (n - 1);
  const double dphi = 2.0 * std::numbers::pi / (n - 1);

  DiscordResult r;
  r.classical_information = -1.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n - 1; ++j) {
      const double value = objective(i * dtheta, j * dphi);
      if (value > r.classical_information) {
        r.classical_information = value;
        r.theta = i * dtheta;
        r.phi = j * dphi;
      }
    }
  }

  double theta = r.theta;
  double phi = r.phi;
  double best = r.classical_information;
  double st = dtheta;
  double sp = dphi;
  for (int it = 0; it < opt.refine_iters; ++it) {
    bool moved = false;
    const double candidates[4][2] = {{theta + st, phi}, {theta - st, phi}, {theta, phi + sp}, {theta, phi - sp}};
    for (const auto& c : candidates) {
      const double value = objective(c[0], c[1]);
      if (value > best) {
        best = value;
        theta = c[0];
        phi = c[1];
        moved = true;
      }
    }
    if (!moved) {
      st *= 0.5;
      sp *= 0.5;
    }
  }
  if (best > r.classical_information) {
    r.classical_information = best;
    r.theta = theta;
    r.phi = phi;
  }
  r.mutual_information = mutual_information(rho);
  r.discord = std::max(0.0, r.mutual_information - r.classical_information);
  return r;
}

[[nodiscard]] inline double discord(const DensityOperator& rho, std::size_t measured_side = 0,
                                    const DiscordOptions& opt = {}) {
  return discord_details(rho, measured_side, opt).discord;
}

}  // namespace qcensor
