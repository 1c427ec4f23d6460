#pragma once

// Conditional resource-destroying channels and their action on the joint
// message ⊗ system registers of N senders.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qcensor/channels.hpp"
#include "qcensor/description.hpp"
#include "qcensor/errors.hpp"
#include "qcensor/linalg.hpp"
#include "qcensor/qrt.hpp"
#include "qcensor/states.hpp"

namespace qcensor {

/// Per-label channel Δ_m for a description, without checking whether the kind
/// is admissible for the theory.
[[nodiscard]] inline KrausChannel make_branch(const Description& d, ChannelKind kind) {
  if (kind == ChannelKind::eigen_dephasing) return dephasing_channel(described_basis(d), d.sig);
  if (d.format == PayloadFormat::real_eigenbasis) {
    throw DomainError("a replacement branch needs a description of the full state, not only its eigenbasis");
  }
  if (d.format == PayloadFormat::product_ensemble) {
    std::vector<double> weights;
    std::vector<Vector> vectors;
    for (const auto& term : described_ensemble(d)) {
      weights.push_back(term.weight);
      vectors.push_back(product_vector(term));
    }
    return replacement_channel(weights, vectors, d.sig, d.sig);
  }
  return replacement_channel(described_state(d));
}

/// Replacement by the maximally mixed state, which is free in every implemented theory.
[[nodiscard]] inline KrausChannel default_branch(const DimSignature& system) {
  return replacement_channel(maximally_mixed(system));
}

[[nodiscard]] inline bool kind_allowed(Theory theory, ChannelKind kind) {
  return kind == ChannelKind::replacement || theory == Theory::coherence || theory == Theory::imaginarity;
}

class ConditionalRDChannel {
 public:
  ConditionalRDChannel(Theory theory, ChannelKind kind) : theory_(theory), kind_(kind) {
    if (!kind_allowed(theory, kind)) {
      throw DomainError("eigen_dephasing is not a conditional resource-destroying channel for " +
                        std::string(to_string(theory)) +
                        ": eigenvectors of a free state need not be free, so a resource state sharing them "
                        "(e.g. a maximally entangled eigenvector of an isotropic state) passes unchanged");
    }
  }

  /// Adds a label (idempotent) and returns its message-basis index.
  std::size_t add(const Description& d) {
    if (d.theory != theory_) throw DomainError("description belongs to a different resource theory");
    if (auto it = index_.find(d.label); it != index_.end()) return it->second;
    branches_.push_back(make_branch(d, kind_));
    descriptions_.push_back(d);
    index_.emplace(d.label, descriptions_.size() - 1);
    return descriptions_.size() - 1;
  }

  [[nodiscard]] Theory theory() const { return theory_; }
  [[nodiscard]] ChannelKind kind() const { return kind_; }
  [[nodiscard]] const std::vector<Description>& descriptions() const { return descriptions_; }
  [[nodiscard]] std::size_t label_count() const { return descriptions_.size(); }
  /// One basis state per registered label plus the reserved "unknown" label.
  [[nodiscard]] std::size_t message_dim() const { return descriptions_.size() + 1; }
  [[nodiscard]] std::size_t unknown_index() const { return descriptions_.size(); }

  [[nodiscard]] std::size_t index_of(const std::string& label) const {
    auto it = index_.find(label);
    return it == index_.end() ? unknown_index() : it->second;
  }

  /// Δ_m for message index m; the default branch for the unknown label or when
  /// the description's register does not match the sender's system.
  [[nodiscard]] KrausChannel branch(std::size_t index, const DimSignature& system) const {
    if (index > unknown_index()) throw DimensionError("message index out of range");
    if (index == unknown_index() || !(descriptions_[index].sig == system)) return default_branch(system);
    return branches_[index];
  }

 private:
  Theory theory_;
  ChannelKind kind_;
  std::vector<Description> descriptions_;
  std::vector<KrausChannel> branches_;
  std::map<std::string, std::size_t> index_;
};

[[nodiscard]] inline ConditionalRDChannel build_conditional_channel(Theory theory, ChannelKind kind,
                                                                    const std::vector<Description>& descriptions) {
  ConditionalRDChannel ch(theory, kind);
  for (const auto& d : descriptions) ch.add(d);
  return ch;
}

/// One sender's registers inside a joint operator: a message register of
/// `message_dim` followed by the system factors. `label_index` maps the local
/// message basis to the channel's label indices (empty: identity, which needs
/// message_dim == channel message_dim).
struct SenderRegister {
  std::size_t message_dim = 2;
  std::vector<std::size_t> label_index;
  DimSignature system;
};

using RegisterLayout = std::vector<SenderRegister>;

[[nodiscard]] inline DimSignature joint_signature(const RegisterLayout& layout) {
  std::vector<std::size_t> dims;
  for (const auto& r : layout) {
    dims.push_back(r.message_dim);
    dims.insert(dims.end(), r.system.dims().begin(), r.system.dims().end());
  }
  return DimSignature(std::move(dims));
}

[[nodiscard]] inline DimSignature system_signature(const RegisterLayout& layout) {
  std::vector<std::size_t> dims;
  for (const auto& r : layout) dims.insert(dims.end(), r.system.dims().begin(), r.system.dims().end());
  return DimSignature(std::move(dims));
}

/// Reads out every message register in its label basis and applies
/// Δ_{m_1} ⊗ … ⊗ Δ_{m_N} to the corresponding diagonal block:
/// Σ_{m} (Δ_{m_1} ⊗ … ⊗ Δ_{m_N})(⟨m|ρ|m⟩). Works on any operator (the map is linear).
[[nodiscard]] inline Matrix apply_censorship(const ConditionalRDChannel& ch, const Matrix& joint,
                                             const RegisterLayout& layout) {
  if (layout.empty()) throw DimensionError("register layout is empty");
  const DimSignature jsig = joint_signature(layout);
  detail::require_square_matching(joint, jsig);

  std::vector<std::vector<std::size_t>> maps;
  for (const auto& r : layout) {
    std::vector<std::size_t> m = r.label_index;
    if (m.empty()) {
      if (r.message_dim != ch.message_dim()) {
        throw DimensionError("message register has dimension " + std::to_string(r.message_dim) +
                             " but the channel reads " + std::to_string(ch.message_dim()) + " labels");
      }
      for (std::size_t i = 0; i < r.message_dim; ++i) m.push_back(i);
    }
    if (m.size() != r.message_dim) throw DimensionError("label map size does not match message register");
    for (std::size_t idx : m)
      if (idx > ch.unknown_index()) throw DimensionError("label map points outside the channel's labels");
    maps.push_back(std::move(m));
  }

  // Reorder to [M_1 … M_N, systems].
  std::vector<std::size_t> order;
  std::vector<std::size_t> system_first(layout.size());
  std::size_t pos = 0;
  for (const auto& r : layout) {
    order.push_back(pos);
    pos += 1 + r.system.size();
  }
  pos = 0;
  std::size_t sys_factor = 0;
  for (std::size_t s = 0; s < layout.size(); ++s) {
    system_first[s] = sys_factor;
    for (std::size_t k = 0; k < layout[s].system.size(); ++k) order.push_back(pos + 1 + k);
    pos += 1 + layout[s].system.size();
    sys_factor += layout[s].system.size();
  }
  const Matrix permuted = permute_subsystems(joint, jsig, order);
  const DimSignature ssig = system_signature(layout);
  const auto da = static_cast<Eigen::Index>(ssig.total());

  std::size_t message_total = 1;
  for (const auto& r : layout) message_total *= r.message_dim;

  Matrix out = Matrix::Zero(da, da);
  std::vector<std::size_t> digits(layout.size(), 0);
  for (std::size_t mi = 0; mi < message_total; ++mi) {
    std::size_t rest = mi;
    for (std::size_t s = layout.size(); s-- > 0;) {
      digits[s] = rest % layout[s].message_dim;
      rest /= layout[s].message_dim;
    }
    const auto off = static_cast<Eigen::Index>(mi) * da;
    Matrix block = permuted.block(off, off, da, da);
    if (block.cwiseAbs().maxCoeff() == 0.0) continue;
    for (std::size_t s = 0; s < layout.size(); ++s) {
      const KrausChannel branch = ch.branch(maps[s][digits[s]], layout[s].system);
      block = apply_on_factors(branch, block, ssig, system_first[s]).first;
    }
    out += block;
  }
  return out;
}

[[nodiscard]] inline DensityOperator apply_censorship(const ConditionalRDChannel& ch, const DensityOperator& joint,
                                                      const RegisterLayout& layout) {
  if (!(joint.signature() == joint_signature(layout))) {
    throw DimensionError("joint state signature " + joint.signature().str() + " does not match register layout " +
                         joint_signature(layout).str());
  }
  return DensityOperator(apply_censorship(ch, joint.matrix(), layout), system_signature(layout));
}

/// |m⟩⟨m| ⊗ ρ for a single sender announcing message index m.
[[nodiscard]] inline DensityOperator announce(std::size_t message_dim, std::size_t index, const DensityOperator& rho) {
  const Vector e = basis_ket(message_dim, index);
  return DensityOperator(kron(Matrix(e * e.adjoint()), rho.matrix()),
                         DimSignature::single(message_dim).concat(rho.signature()));
}

}  // namespace qcensor
