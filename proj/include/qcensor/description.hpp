#pragma once

// Classical descriptions m_σ of free states.
//
// A description keeps its canonical payload at full precision (branches are
// rebuilt from it) and a label: the payload quantized to 9 fractional digits
// behind a header naming the theory, payload format and register dimensions.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "qcensor/errors.hpp"
#include "qcensor/linalg.hpp"
#include "qcensor/qrt.hpp"
#include "qcensor/states.hpp"

namespace qcensor {

/// Which per-label channel the censoring agent builds.
enum class ChannelKind { replacement, eigen_dephasing };

[[nodiscard]] inline std::string_view to_string(ChannelKind k) {
  return k == ChannelKind::replacement ? "replacement" : "eigen_dephasing";
}

[[nodiscard]] inline ChannelKind parse_channel_kind(std::string_view name) {
  if (name == "replacement") return ChannelKind::replacement;
  if (name == "eigen_dephasing") return ChannelKind::eigen_dephasing;
  throw DomainError("unknown channel kind '" + std::string(name) + "' (expected replacement or eigen_dephasing)");
}

enum class PayloadFormat {
  probabilities,     // p_0 … p_{d−2} of a diagonal state
  real_eigenbasis,   // canonical real eigenvectors, columns in decreasing lexicographic order
  full_state,        // diagonal p_0 … p_{d−2}, then upper-triangle entries row by row
  product_ensemble,  // per term: weight (omitted for a single term), then each factor's amplitudes
};

[[nodiscard]] inline std::string_view to_string(PayloadFormat f) {
  switch (f) {
    case PayloadFormat::probabilities: return "probabilities";
    case PayloadFormat::real_eigenbasis: return "eigenbasis";
    case PayloadFormat::full_state: return "state";
    case PayloadFormat::product_ensemble: return "ensemble";
  }
  return "?";
}

struct EnsembleTerm {
  double weight = 0.0;
  std::vector<Vector> factors;
};

/// Separable state Σ_b t_b |ψ_b^1⟩⟨ψ_b^1| ⊗ … ⊗ |ψ_b^K⟩⟨ψ_b^K|.
using ProductEnsemble = std::vector<EnsembleTerm>;

[[nodiscard]] inline DimSignature ensemble_signature(const ProductEnsemble& ens) {
  if (ens.empty() || ens[0].factors.empty()) throw DimensionError("empty product ensemble");
  std::vector<std::size_t> dims;
  for (const Vector& f : ens[0].factors) dims.push_back(static_cast<std::size_t>(f.size()));
  DimSignature sig(dims);
  for (const auto& term : ens) {
    if (term.factors.size() != dims.size()) throw DimensionError("ensemble terms have different factor counts");
    for (std::size_t k = 0; k < dims.size(); ++k)
      if (static_cast<std::size_t>(term.factors[k].size()) != dims[k]) throw DimensionError("ensemble factor size mismatch");
  }
  return sig;
}

[[nodiscard]] inline Vector product_vector(const EnsembleTerm& term) {
  Vector v = term.factors.at(0);
  for (std::size_t k = 1; k < term.factors.size(); ++k) v = kron_ket(v, term.factors[k]);
  return v;
}

[[nodiscard]] inline DensityOperator ensemble_state(const ProductEnsemble& ens) {
  const DimSignature sig = ensemble_signature(ens);
  const auto n = static_cast<Eigen::Index>(sig.total());
  Matrix m = Matrix::Zero(n, n);
  for (const auto& term : ens) {
    const Vector v = product_vector(term);
    m += term.weight * v * v.adjoint();
  }
  return DensityOperator(std::move(m), sig);
}

struct Description {
  Theory theory = Theory::coherence;
  PayloadFormat format = PayloadFormat::full_state;
  DimSignature sig;
  std::size_t terms = 0;  // product_ensemble only
  std::vector<Complex> payload;
  std::string label;
};

inline constexpr double kLabelScale = 1e9;

namespace detail {

inline std::string fixed9(long long q) {
  const unsigned long long a = q < 0 ? static_cast<unsigned long long>(-q) : static_cast<unsigned long long>(q);
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%llu.%09llu", q < 0 ? "-" : "", a / 1000000000ULL, a % 1000000000ULL);
  return buf;
}

inline std::string quantize(const Complex& z) {
  const long long re = std::llround(z.real() * kLabelScale);
  const long long im = std::llround(z.imag() * kLabelScale);
  std::string s = fixed9(re);
  if (im != 0) s += (im > 0 ? "+" : "") + fixed9(im) + "i";
  return s;
}

inline std::string make_label(const Description& d) {
  std::string s = std::string(to_string(d.theory)) + "/" + std::string(to_string(d.format)) + "/" + d.sig.str();
  if (d.format == PayloadFormat::product_ensemble) s += "x" + std::to_string(d.terms);
  s += ":";
  for (std::size_t i = 0; i < d.payload.size(); ++i) {
    if (i) s += ",";
    s += quantize(d.payload[i]);
  }
  return s;
}

inline void require_free(Theory theory, const DensityOperator& sigma) {
  ResourceVerdict v;
  switch (theory) {
    case Theory::coherence: v = is_free_coherence(sigma); break;
    case Theory::imaginarity: v = is_free_imaginarity(sigma); break;
    case Theory::entanglement: v = is_free_entanglement_all_cuts(sigma); break;
    case Theory::discord:
      if (sigma.signature().size() != 2) throw UnsupportedError("discord descriptions need a bipartite state");
      v = is_classical_quantum(sigma, 0);
      break;
    case Theory::locality:
      if (!(sigma.signature() == DimSignature{2, 2})) throw UnsupportedError("locality descriptions need a two-qubit state");
      v = is_free_locality(sigma);
      break;
  }
  if (!v.is_free) {
    throw DomainError("state is not free for " + std::string(to_string(theory)) + " (" + v.witness + " = " +
                      std::to_string(v.witness_value) + ")");
  }
}

}  // namespace detail

/// Full-state description without a membership check.
[[nodiscard]] inline Description describe_state(Theory theory, const DensityOperator& sigma) {
  Description d{theory, PayloadFormat::full_state, sigma.signature(), 0, {}, {}};
  const Matrix& m = sigma.matrix();
  const Eigen::Index n = m.rows();
  for (Eigen::Index i = 0; i + 1 < n; ++i) d.payload.emplace_back(m(i, i).real(), 0.0);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) d.payload.push_back(m(i, j));
  d.label = detail::make_label(d);
  return d;
}

[[nodiscard]] inline Description encode_description(const ProductEnsemble& ensemble) {
  const DimSignature sig = ensemble_signature(ensemble);
  double total = 0.0;
  for (const auto& term : ensemble) {
    if (!(term.weight > 0.0)) throw DomainError("ensemble weights must be positive");
    total += term.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) throw DomainError("ensemble weights must sum to 1");
  Description d{Theory::entanglement, PayloadFormat::product_ensemble, sig, ensemble.size(), {}, {}};
  for (const auto& term : ensemble) {
    if (ensemble.size() > 1) d.payload.emplace_back(term.weight / total, 0.0);
    for (const Vector& f : term.factors) {
      const double norm = f.norm();
      if (std::abs(norm - 1.0) > 1e-6) throw InvalidStateError("ensemble factor is not normalized");
      Vector v = f / norm;
      detail::canonicalize_phase(v);
      for (Eigen::Index i = 0; i < v.size(); ++i) d.payload.push_back(v(i));
    }
  }
  d.label = detail::make_label(d);
  return d;
}

/// Canonical description of a free state. Coherence uses the probability
/// vector; imaginarity with eigen_dephasing uses the real eigenbasis, so states
/// sharing eigenvectors share a label; discord and locality (and imaginarity
/// with replacement) carry the full state. Entanglement needs an explicit
/// product ensemble.
[[nodiscard]] inline Description encode_description(Theory theory, const DensityOperator& sigma, ChannelKind kind) {
  if (theory == Theory::entanglement) {
    throw DomainError("entanglement descriptions need an explicit separable ensemble");
  }
  detail::require_free(theory, sigma);
  const Matrix& m = sigma.matrix();
  const Eigen::Index n = m.rows();
  if (theory == Theory::coherence) {
    Description d{theory, PayloadFormat::probabilities, sigma.signature(), 0, {}, {}};
    for (Eigen::Index i = 0; i + 1 < n; ++i) d.payload.emplace_back(m(i, i).real(), 0.0);
    d.label = detail::make_label(d);
    return d;
  }
  if (theory == Theory::imaginarity && kind == ChannelKind::eigen_dephasing) {
    const Matrix real_part = m.real().cast<Complex>();
    const EigenDecomposition eig = hermitian_eig(real_part);
    std::vector<Vector> cols;
    for (Eigen::Index c = 0; c < n; ++c) cols.emplace_back(eig.vectors.col(c).real().cast<Complex>());
    std::sort(cols.begin(), cols.end(), [](const Vector& a, const Vector& b) { return detail::lex_less(b, a); });
    Description d{theory, PayloadFormat::real_eigenbasis, sigma.signature(), 0, {}, {}};
    for (const Vector& c : cols)
      for (Eigen::Index i = 0; i < n; ++i) d.payload.push_back(c(i));
    d.label = detail::make_label(d);
    return d;
  }
  return describe_state(theory, sigma);
}

[[nodiscard]] inline Description encode_description(Theory theory, const DensityOperator& sigma) {
  const bool eigen = theory == Theory::coherence || theory == Theory::imaginarity;
  return encode_description(theory, sigma, eigen ? ChannelKind::eigen_dephasing : ChannelKind::replacement);
}

/// Rebuilds the separable ensemble carried by a product_ensemble description.
[[nodiscard]] inline ProductEnsemble described_ensemble(const Description& d) {
  if (d.format != PayloadFormat::product_ensemble) throw DomainError("description does not carry an ensemble");
  ProductEnsemble ens;
  std::size_t pos = 0;
  for (std::size_t t = 0; t < d.terms; ++t) {
    EnsembleTerm term;
    term.weight = d.terms > 1 ? d.payload.at(pos++).real() : 1.0;
    for (std::size_t k = 0; k < d.sig.size(); ++k) {
      Vector v(static_cast<Eigen::Index>(d.sig[k]));
      for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = d.payload.at(pos++);
      term.factors.push_back(std::move(v));
    }
    ens.push_back(std::move(term));
  }
  if (pos != d.payload.size()) throw DimensionError("ensemble payload has trailing entries");
  return ens;
}

/// The state σ a description identifies. Eigenbasis descriptions identify only
/// a class of states and are rejected.
[[nodiscard]] inline DensityOperator described_state(const Description& d) {
  const auto n = static_cast<Eigen::Index>(d.sig.total());
  switch (d.format) {
    case PayloadFormat::probabilities: {
      if (d.payload.size() + 1 != static_cast<std::size_t>(n)) throw DimensionError("probability payload size mismatch");
      Matrix m = Matrix::Zero(n, n);
      double rest = 1.0;
      for (Eigen::Index i = 0; i + 1 < n; ++i) {
        m(i, i) = d.payload[static_cast<std::size_t>(i)].real();
        rest -= m(i, i).real();
      }
      m(n - 1, n - 1) = rest;
      return DensityOperator(std::move(m), d.sig);
    }
    case PayloadFormat::full_state: {
      const auto expected = static_cast<std::size_t>(n - 1 + n * (n - 1) / 2);
      if (d.payload.size() != expected) throw DimensionError("state payload size mismatch");
      Matrix m = Matrix::Zero(n, n);
      std::size_t pos = 0;
      double rest = 1.0;
      for (Eigen::Index i = 0; i + 1 < n; ++i) {
        m(i, i) = d.payload[pos++].real();
        rest -= m(i, i).real();
      }
      m(n - 1, n - 1) = rest;
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
          m(i, j) = d.payload[pos++];
          m(j, i) = std::conj(m(i, j));
        }
      }
      return DensityOperator(std::move(m), d.sig);
    }
    case PayloadFormat::product_ensemble: return ensemble_state(described_ensemble(d));
    case PayloadFormat::real_eigenbasis: break;
  }
  throw DomainError("an eigenbasis description does not identify a single state");
}

/// Orthonormal eigenbasis (columns) associated with a description.
[[nodiscard]] inline Matrix described_basis(const Description& d) {
  const auto n = static_cast<Eigen::Index>(d.sig.total());
  if (d.format == PayloadFormat::probabilities) return Matrix::Identity(n, n);
  if (d.format == PayloadFormat::real_eigenbasis) {
    if (d.payload.size() != static_cast<std::size_t>(n * n)) throw DimensionError("eigenbasis payload size mismatch");
    Matrix b(n, n);
    for (Eigen::Index c = 0; c < n; ++c)
      for (Eigen::Index i = 0; i < n; ++i) b(i, c) = d.payload[static_cast<std::size_t>(c * n + i)];
    return b;
  }
  return hermitian_eig(described_state(d).matrix()).vectors;
}

}  // namespace qcensor
