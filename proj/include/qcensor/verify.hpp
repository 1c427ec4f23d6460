#pragma once

// Seeded property suites for the unbreakability / breakability results and the
// channel axioms. Each suite reports the worst observed value per invariant.

#include <cstdint>
#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "qcensor/censorship.hpp"
#include "qcensor/channels.hpp"
#include "qcensor/discord.hpp"
#include "qcensor/protocol.hpp"
#include "qcensor/qrt.hpp"
#include "qcensor/random.hpp"

namespace qcensor {

struct InvariantCheck {
  std::string name;
  double observed = 0.0;  // worst case over all samples
  double bound = 0.0;
  bool upper = true;  // passes iff observed ≤ bound (upper) or observed ≥ bound (lower)
  std::size_t evaluations = 0;

  [[nodiscard]] bool passed() const { return evaluations > 0 && (upper ? observed <= bound : observed >= bound); }

  void record(double value) {
    if (evaluations == 0) observed = value;
    else observed = upper ? std::max(observed, value) : std::min(observed, value);
    ++evaluations;
  }
};

struct SuiteResult {
  std::string suite;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::deque<InvariantCheck> checks;  // stable references while suites record
  std::vector<std::string> notes;

  [[nodiscard]] bool passed() const {
    for (const auto& c : checks)
      if (!c.passed()) return false;
    return !checks.empty();
  }

  InvariantCheck& check(const std::string& name, double bound, bool upper = true) {
    for (auto& c : checks)
      if (c.name == name) return c;
    checks.push_back({name, 0.0, bound, upper, 0});
    return checks.back();
  }
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"affine_unbreakable", "convex_unbreakable", "discord_breach", "activation",
                                                 "channel_axioms"};
  return names;
}

namespace detail {

inline ProductEnsemble random_product_ensemble(Rng& rng, std::size_t factors, std::size_t terms) {
  ProductEnsemble ens;
  double total = 0.0;
  for (std::size_t t = 0; t < terms; ++t) {
    EnsembleTerm term{rng.uniform(0.1, 1.0), {}};
    for (std::size_t k = 0; k < factors; ++k) term.factors.push_back(random_ket(2, rng));
    total += term.weight;
    ens.push_back(std::move(term));
  }
  for (auto& term : ens) term.weight /= total;
  return ens;
}

inline DensityOperator random_cq_state(Rng& rng) {
  const Matrix u = random_unitary(2, rng);
  const double q = rng.uniform(0.05, 0.95);
  const Matrix m = q * kron(Matrix(u.col(0) * u.col(0).adjoint()), random_density(2, 1 + rng.below(2), rng).matrix()) +
                   (1 - q) * kron(Matrix(u.col(1) * u.col(1).adjoint()), random_density(2, 1 + rng.below(2), rng).matrix());
  return DensityOperator(m, DimSignature{2, 2});
}

// How far an operator is outside the theory's free set (≤ 0 means free).
inline double freeness_excess(Theory theory, const DensityOperator& rho) {
  switch (theory) {
    case Theory::coherence: return is_free_coherence(rho).witness_value - kTolFree;
    case Theory::imaginarity: return is_free_imaginarity(rho).witness_value - kTolFree;
    case Theory::entanglement: return -is_free_entanglement_all_cuts(rho).witness_value - kTolFree;
    case Theory::discord: return is_classical_quantum(rho, 0).witness_value - 1e-8;
    case Theory::locality: return chsh_parameter(rho) - 1.0 - kTolFree;
  }
  return 0.0;
}

inline NetworkScenario two_cq_mixture_scenario(const DensityOperator& a, const DensityOperator& b, double p) {
  NetworkScenario sc;
  sc.theory = Theory::discord;
  sc.channel_kind = ChannelKind::replacement;
  sc.strategies.push_back(
      mixture_sender({p, 1 - p}, {a, b}, {encode_description(Theory::discord, a), encode_description(Theory::discord, b)}));
  return sc;
}

}  // namespace detail

/// Two senders, 2-label message registers each, eigen-dephasing branches from
/// random real states, arbitrary (complex) joint inputs: the receiver state is real.
[[nodiscard]] inline SuiteResult verify_affine_unbreakable(std::size_t samples, std::uint64_t seed) {
  SuiteResult r{"affine_unbreakable", samples, seed, {}, {}};
  Rng rng(seed);
  auto& imag = r.check("max |imaginary entry| of receiver state", 1e-9);
  auto& trace = r.check("trace defect", 1e-10);
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<Description> descs;
    for (int k = 0; k < 4; ++k) {
      descs.push_back(encode_description(Theory::imaginarity, random_real_density(DimSignature{2}, 2, rng),
                                         ChannelKind::eigen_dephasing));
    }
    const auto ch = build_conditional_channel(Theory::imaginarity, ChannelKind::eigen_dephasing, descs);
    const RegisterLayout layout = {
        {2, {ch.index_of(descs[0].label), ch.index_of(descs[1].label)}, DimSignature{2}},
        {2, {ch.index_of(descs[2].label), ch.index_of(descs[3].label)}, DimSignature{2}}};
    const auto joint = random_density(joint_signature(layout), 1 + rng.below(16), rng);
    const Matrix out = apply_censorship(ch, joint.matrix(), layout);
    imag.record(out.imag().cwiseAbs().maxCoeff());
    trace.record(std::abs(out.trace() - Complex(1.0)));
  }
  return r;
}

/// Two senders with two-qubit systems, replacement branches from random
/// separable states: the receiver state is Σ t_{a1 a2} σ^{a1} ⊗ σ^{a2} and PPT.
[[nodiscard]] inline SuiteResult verify_convex_unbreakable(std::size_t samples, std::uint64_t seed) {
  SuiteResult r{"convex_unbreakable", samples, seed, {}, {}};
  Rng rng(seed);
  auto& recon = r.check("max deviation from reconstructed convex mixture", 1e-9);
  auto& ppt = r.check("min partial-transpose eigenvalue over all cuts", -1e-9, false);
  auto& trace = r.check("trace defect", 1e-10);
  const DimSignature pair{2, 2};
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<ProductEnsemble> ens;
    std::vector<Description> descs;
    for (int k = 0; k < 4; ++k) {
      ens.push_back(detail::random_product_ensemble(rng, 2, 1 + rng.below(3)));
      descs.push_back(encode_description(ens.back()));
    }
    const auto ch = build_conditional_channel(Theory::entanglement, ChannelKind::replacement, descs);
    const RegisterLayout layout = {{2, {ch.index_of(descs[0].label), ch.index_of(descs[1].label)}, pair},
                                   {2, {ch.index_of(descs[2].label), ch.index_of(descs[3].label)}, pair}};
    const auto joint = random_density(joint_signature(layout), 1 + rng.below(64), rng);
    const DensityOperator out = apply_censorship(ch, joint, layout);

    // Weights from explicit message projectors on the original register order.
    Matrix expected = Matrix::Zero(16, 16);
    const Matrix id4 = Matrix::Identity(4, 4);
    for (std::size_t a1 = 0; a1 < 2; ++a1) {
      for (std::size_t a2 = 0; a2 < 2; ++a2) {
        const Vector e1 = basis_ket(2, a1), e2 = basis_ket(2, a2);
        const Matrix proj = kron(Matrix(e1 * e1.adjoint()), kron(id4, kron(Matrix(e2 * e2.adjoint()), id4)));
        const double t = (proj * joint.matrix()).trace().real();
        expected += t * kron(ensemble_state(ens[a1]).matrix(), ensemble_state(ens[2 + a2]).matrix());
      }
    }
    recon.record(max_abs_diff(out.matrix(), expected));
    ppt.record(is_free_entanglement_all_cuts(out).witness_value);
    trace.record(std::abs(out.matrix().trace() - Complex(1.0)));
  }
  return r;
}

/// A mixture of classical-quantum states with their own descriptions passes
/// intact and can carry discord: the fixed two-state construction, plus sampled
/// pairs with random classical bases.
[[nodiscard]] inline SuiteResult verify_discord_breach(std::size_t samples, std::uint64_t seed) {
  SuiteResult r{"discord_breach", samples, seed, {}, {}};
  const auto s0 = from_pure(PureState{kron_ket(basis_ket(2, 0), basis_ket(2, 0)), DimSignature{2, 2}});
  const auto s1 = from_pure(PureState{kron_ket(plus_ket(), basis_ket(2, 1)), DimSignature{2, 2}});
  const auto fixed = run_protocol(detail::two_cq_mixture_scenario(s0, s1, 0.5));
  r.check("breach flagged on the two-state construction", 1.0, false).record(fixed.breach ? 1.0 : 0.0);
  r.check("receiver discord on the two-state construction (nats)", 1e-3, false)
      .record(discord(fixed.receiver_state, 0));
  auto& comp = r.check("max component discord (nats)", 1e-6);
  comp.record(discord(s0, 0));
  comp.record(discord(s1, 0));

  Rng rng(seed);
  auto& intact = r.check("max deviation of receiver from the sent mixture", 1e-10);
  auto& cq = r.check("max classical-quantum defect of components", 1e-8);
  std::size_t breaches = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const auto a = detail::random_cq_state(rng);
    const auto b = detail::random_cq_state(rng);
    const double p = rng.uniform(0.1, 0.9);
    cq.record(is_classical_quantum(a, 0).witness_value);
    cq.record(is_classical_quantum(b, 0).witness_value);
    const auto rep = run_protocol(detail::two_cq_mixture_scenario(a, b, p));
    intact.record(max_abs_diff(rep.receiver_state.matrix(), p * a.matrix() + (1 - p) * b.matrix()));
    if (rep.breach) ++breaches;
  }
  r.notes.push_back("sampled mixtures flagged as breaches: " + std::to_string(breaches) + " of " + std::to_string(samples));
  return r;
}

/// Honest senders of isotropic states inside the local window pass unchanged,
/// are entangled, show no CHSH violation, and are flagged as activation risks.
[[nodiscard]] inline SuiteResult verify_activation(std::size_t samples, std::uint64_t seed) {
  SuiteResult r{"activation", samples, seed, {}, {}};
  Rng rng(seed);
  const auto window = isotropic_local_range(2);
  auto& marg = r.check("max deviation of receiver marginals from sent state", 1e-10);
  auto& joint = r.check("max deviation of receiver from sigma^{(x)N}", 1e-10);
  auto& npt = r.check("max partial-transpose eigenvalue of sent state", 0.0);
  auto& chsh = r.check("max CHSH parameter M", 1.0);
  auto& flag = r.check("activation risk flagged (min over samples)", 1.0, false);
  auto& breach = r.check("breach flagged (max over samples)", 0.0);
  for (std::size_t s = 0; s < std::max<std::size_t>(samples, 1); ++s) {
    const double p = s == 0 ? window.upper : rng.uniform(window.lower + 1e-3, window.upper);
    const std::size_t n = 2 + s % 2;
    const auto sigma = isotropic(2, p);
    NetworkScenario sc;
    sc.theory = Theory::locality;
    for (std::size_t k = 0; k < n; ++k) sc.strategies.push_back(honest_sender(Theory::locality, sigma, ChannelKind::replacement));
    const auto rep = run_protocol(sc);
    joint.record(max_abs_diff(rep.receiver_state.matrix(), tensor_power(sigma, n).matrix()));
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t keep[] = {2 * k, 2 * k + 1};
      marg.record(max_abs_diff(partial_trace(rep.receiver_state.matrix(), rep.receiver_state.signature(), keep), sigma.matrix()));
    }
    npt.record(is_free_entanglement(sigma).witness_value);
    chsh.record(chsh_parameter(sigma));
    flag.record(rep.activation_risk ? 1.0 : 0.0);
    breach.record(rep.breach ? 1.0 : 0.0);
  }
  r.notes.push_back("local window for d = 2: (" + window.lower_exact->str() + ", " + window.upper_exact->str() + "]");
  return r;
}

/// Trace preservation, idempotence of dephasing branches, input independence of
/// replacement branches, and the free-output / fixed-point conditions of every
/// conditional branch.
[[nodiscard]] inline SuiteResult verify_channel_axioms(std::size_t samples, std::uint64_t seed) {
  SuiteResult r{"channel_axioms", samples, seed, {}, {}};
  Rng rng(seed);
  auto& tp = r.check("trace defect of channel outputs", 1e-10);
  auto& kraus = r.check("Kraus completeness defect", 1e-10);
  auto& idem = r.check("dephasing idempotence defect", 1e-10);
  auto& indep = r.check("replacement input dependence", 1e-10);
  auto& free_out = r.check("branch output outside free set (excess over tolerance)", 0.0);
  auto& fixed = r.check("branch fixed-point defect on described state", 1e-9);

  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t d = 2 + s % 2;
    const DimSignature sig = DimSignature::single(d);
    std::vector<KrausChannel> channels = {identity_channel(sig), computational_dephasing(sig),
                                          dephasing_channel(random_unitary(d, rng), sig),
                                          replacement_channel(random_density(d, 1 + rng.below(d), rng)),
                                          depolarizing(sig, rng.uniform()),
                                          noise_channel(NoiseSpec{"dephasing", rng.uniform()}, d)};
    if (d == 2) channels.push_back(amplitude_damping(rng.uniform()));

    struct Branch {
      Theory theory;
      ChannelKind kind;
      KrausChannel channel;
      DensityOperator described;
    };
    std::vector<Branch> branches;
    std::vector<double> probs(d);
    double total = 0.0;
    for (double& x : probs) total += (x = rng.uniform(0.05, 1.0));
    for (double& x : probs) x /= total;
    const auto diag = diagonal_state(probs);
    const auto real = random_real_density(sig, 1 + rng.below(d), rng);
    const auto ens = detail::random_product_ensemble(rng, 2, 1 + rng.below(3));
    const auto cq = detail::random_cq_state(rng);
    const auto local = isotropic(2, rng.uniform(0.0, 0.7));
    for (ChannelKind kind : {ChannelKind::replacement, ChannelKind::eigen_dephasing}) {
      branches.push_back({Theory::coherence, kind, make_branch(encode_description(Theory::coherence, diag, kind), kind), diag});
      branches.push_back({Theory::imaginarity, kind, make_branch(encode_description(Theory::imaginarity, real, kind), kind), real});
    }
    branches.push_back({Theory::entanglement, ChannelKind::replacement,
                        make_branch(encode_description(ens), ChannelKind::replacement), ensemble_state(ens)});
    branches.push_back({Theory::discord, ChannelKind::replacement,
                        make_branch(encode_description(Theory::discord, cq), ChannelKind::replacement), cq});
    branches.push_back({Theory::locality, ChannelKind::replacement,
                        make_branch(encode_description(Theory::locality, local), ChannelKind::replacement), local});

    for (const auto& ch : channels) {
      kraus.record(ch.trace_preservation_defect());
      const auto rho = random_density(ch.input(), 1 + rng.below(ch.input().total()), rng);
      tp.record(std::abs(ch.apply(rho.matrix()).trace() - Complex(1.0)));
    }
    idem.record(max_abs_diff(channels[1].apply(channels[1].apply(real.matrix())), channels[1].apply(real.matrix())));

    for (const auto& b : branches) {
      kraus.record(b.channel.trace_preservation_defect());
      fixed.record(max_abs_diff(b.channel.apply(b.described.matrix()), b.described.matrix()));
      const DimSignature& bs = b.described.signature();
      const auto x = random_density(bs, 1 + rng.below(bs.total()), rng);
      const auto y = random_density(bs, bs.total(), rng);
      const auto ox = b.channel.apply(x);
      const auto oy = b.channel.apply(y);
      tp.record(std::abs(ox.matrix().trace() - Complex(1.0)));
      free_out.record(detail::freeness_excess(b.theory, ox));
      free_out.record(detail::freeness_excess(b.theory, oy));
      if (b.kind == ChannelKind::eigen_dephasing) {
        idem.record(max_abs_diff(b.channel.apply(ox.matrix()), ox.matrix()));
      } else {
        indep.record(max_abs_diff(ox.matrix(), oy.matrix()));
      }
    }
    const auto def = default_branch(DimSignature{2, 2});
    const auto od = def.apply(random_density(DimSignature{2, 2}, 4, rng));
    for (Theory t : kAllTheories) free_out.record(detail::freeness_excess(t, od));
  }
  return r;
}

[[nodiscard]] inline SuiteResult run_suite(const std::string& name, std::size_t samples, std::uint64_t seed) {
  if (name == "affine_unbreakable") return verify_affine_unbreakable(samples, seed);
  if (name == "convex_unbreakable") return verify_convex_unbreakable(samples, seed);
  if (name == "discord_breach") return verify_discord_breach(samples, seed);
  if (name == "activation") return verify_activation(samples, seed);
  if (name == "channel_axioms") return verify_channel_axioms(samples, seed);
  std::string known;
  for (const auto& n : suite_names()) known += (known.empty() ? "" : ", ") + n;
  throw DomainError("unknown suite '" + name + "' (expected one of: " + known + ")");
}

}  // namespace qcensor
