#pragma once

// The N-sender censorship protocol: senders prepare message ⊗ system states,
// links optionally add noise to the systems, the agent applies the conditional
// channel, and the receivers' joint state is tested for resources.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "qcensor/censorship.hpp"
#include "qcensor/channels.hpp"
#include "qcensor/description.hpp"
#include "qcensor/discord.hpp"
#include "qcensor/qrt.hpp"
#include "qcensor/random.hpp"
#include "qcensor/states.hpp"

namespace qcensor {

enum class StrategyKind { honest, untruthful, correlated };

[[nodiscard]] inline std::string_view to_string(StrategyKind k) {
  switch (k) {
    case StrategyKind::honest: return "honest";
    case StrategyKind::untruthful: return "untruthful";
    case StrategyKind::correlated: return "correlated";
  }
  return "?";
}

/// honest / untruthful: one sender with a system state and a claimed description.
/// correlated: one joint operator over [M_1 A_1 … M_K A_K] for K consecutive
/// senders; sender k's local message basis state j announces claims[k][j].
struct SenderStrategy {
  StrategyKind kind = StrategyKind::honest;
  std::optional<DensityOperator> state;
  std::optional<Description> claimed;
  std::optional<DensityOperator> joint;
  std::vector<DimSignature> systems;
  std::vector<std::vector<Description>> claims;

  [[nodiscard]] std::size_t sender_count() const { return kind == StrategyKind::correlated ? systems.size() : 1; }
};

[[nodiscard]] inline SenderStrategy honest_sender(Theory theory, const DensityOperator& sigma, ChannelKind kind) {
  SenderStrategy s;
  s.kind = StrategyKind::honest;
  s.state = sigma;
  s.claimed = encode_description(theory, sigma, kind);
  return s;
}

[[nodiscard]] inline SenderStrategy honest_sender(const ProductEnsemble& ensemble) {
  SenderStrategy s;
  s.kind = StrategyKind::honest;
  s.state = ensemble_state(ensemble);
  s.claimed = encode_description(ensemble);
  return s;
}

[[nodiscard]] inline SenderStrategy untruthful_sender(const DensityOperator& state, const Description& claimed) {
  SenderStrategy s;
  s.kind = StrategyKind::untruthful;
  s.state = state;
  s.claimed = claimed;
  return s;
}

[[nodiscard]] inline SenderStrategy correlated_senders(const DensityOperator& joint, std::vector<DimSignature> systems,
                                                       std::vector<std::vector<Description>> claims) {
  if (systems.empty() || systems.size() != claims.size()) throw DimensionError("correlated strategy: one claim list per sender");
  RegisterLayout layout;
  for (std::size_t k = 0; k < systems.size(); ++k) {
    if (claims[k].size() < 2) throw DimensionError("correlated strategy: each sender needs at least two claimed labels");
    layout.push_back({claims[k].size(), {}, systems[k]});
  }
  if (!(joint.signature() == joint_signature(layout))) {
    throw DimensionError("correlated strategy: joint signature " + joint.signature().str() + " does not match " +
                         joint_signature(layout).str());
  }
  SenderStrategy s;
  s.kind = StrategyKind::correlated;
  s.joint = joint;
  s.systems = std::move(systems);
  s.claims = std::move(claims);
  return s;
}

/// One sender preparing Σ_b p_b |b⟩⟨b| ⊗ σ^b, announcing claims[b] with σ^b.
[[nodiscard]] inline SenderStrategy mixture_sender(const std::vector<double>& weights,
                                                   const std::vector<DensityOperator>& states,
                                                   const std::vector<Description>& claims) {
  if (weights.size() != states.size() || states.size() != claims.size() || states.size() < 2) {
    throw DimensionError("mixture strategy: need matching weights, states and claims (at least two)");
  }
  const std::size_t m = states.size();
  std::vector<DensityOperator> terms;
  for (std::size_t b = 0; b < m; ++b) terms.push_back(announce(m, b, states[b]));
  return correlated_senders(mixture(weights, terms), {states[0].signature()}, {claims});
}

struct NoiseSpec {
  std::string kind = "identity";
  double param = 0.0;  // dephasing: probability; depolarizing: strength; amplitude_damping: γ
};

/// Single-factor link noise of dimension d.
[[nodiscard]] inline KrausChannel noise_channel(const NoiseSpec& spec, std::size_t d) {
  if (spec.kind == "identity") return identity_channel(d);
  if (spec.kind == "depolarizing") return depolarizing(d, spec.param);
  if (spec.kind == "amplitude_damping") {
    if (d != 2) throw UnsupportedError("amplitude_damping noise acts on qubits only");
    return amplitude_damping(spec.param);
  }
  if (spec.kind == "dephasing") {
    // ρ ↦ (1−q)ρ + q·(computational dephasing of ρ)
    if (!(spec.param >= 0.0 && spec.param <= 1.0)) throw DomainError("dephasing probability must lie in [0, 1]");
    const auto n = static_cast<Eigen::Index>(d);
    std::vector<Matrix> ops;
    if (spec.param < 1.0) ops.emplace_back(std::sqrt(1.0 - spec.param) * Matrix::Identity(n, n));
    if (spec.param > 0.0) {
      for (Eigen::Index a = 0; a < n; ++a) {
        Matrix p = Matrix::Zero(n, n);
        p(a, a) = std::sqrt(spec.param);
        ops.push_back(std::move(p));
      }
    }
    return KrausChannel(std::move(ops), DimSignature::single(d));
  }
  if (spec.kind == "replacement") {
    // replacement by I/d with probability param
    return depolarizing(d, spec.param);
  }
  throw DomainError("unknown noise kind '" + spec.kind +
                    "' (expected identity, dephasing, depolarizing, amplitude_damping or replacement)");
}

/// Applies single-factor noise to every factor of `sig` in `rho`.
[[nodiscard]] inline Matrix apply_link_noise(const NoiseSpec& spec, const Matrix& rho, const DimSignature& sig,
                                             std::size_t first, std::size_t count) {
  Matrix out = rho;
  for (std::size_t k = first; k < first + count; ++k) out = apply_on_factors(noise_channel(spec, sig[k]), out, sig, k).first;
  return out;
}

struct NetworkScenario {
  Theory theory = Theory::coherence;
  ChannelKind channel_kind = ChannelKind::replacement;
  std::vector<SenderStrategy> strategies;
  std::optional<NoiseSpec> noise;
  std::uint64_t seed = 0;
  std::string rng_algorithm = std::string(Rng::kDefaultAlgorithm);

  [[nodiscard]] std::size_t n_senders() const {
    std::size_t n = 0;
    for (const auto& s : strategies) n += s.sender_count();
    return n;
  }
};

struct ScopedVerdict {
  std::string scope;  // "global" or "B<k>"
  ResourceVerdict verdict;
};

struct NoiseDistances {
  std::size_t sender = 0;  // 1-based
  double d_noisy = 0.0;
  double d_censored = 0.0;
};

struct CensorshipReport {
  Theory theory = Theory::coherence;
  DensityOperator receiver_state{Matrix::Identity(2, 2) / 2.0, DimSignature{2}};
  std::vector<DimSignature> receiver_systems;
  std::vector<ScopedVerdict> verdicts;
  bool breach = false;
  bool activation_risk = false;
  std::vector<NoiseDistances> distances;
  std::vector<std::string> notes;
};

namespace detail {

inline std::string num(double x) {
  if (std::abs(x) < 1e-13) x = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

inline std::vector<std::size_t> factor_range(std::size_t first, std::size_t count) {
  std::vector<std::size_t> v(count);
  for (std::size_t k = 0; k < count; ++k) v[k] = first + k;
  return v;
}

// Recognizes p·φ⁺ + (1−p)·I/4 and returns p.
inline std::optional<double> isotropic_parameter(const DensityOperator& rho) {
  if (!(rho.signature() == DimSignature{2, 2})) return std::nullopt;
  const Vector phi = phi_plus_ket(2);
  const double fidelity = phi.dot(rho.matrix() * phi).real();
  const double p = (4.0 * fidelity - 1.0) / 3.0;
  if (p < 0.0 || p > 1.0) return std::nullopt;
  if (max_abs_diff(isotropic(2, p).matrix(), rho.matrix()) > 1e-9) return std::nullopt;
  return p;
}

inline void assess(CensorshipReport& r) {
  const DensityOperator& rho = r.receiver_state;
  switch (r.theory) {
    case Theory::coherence: r.verdicts.push_back({"global", is_free_coherence(rho)}); break;
    case Theory::imaginarity: r.verdicts.push_back({"global", is_free_imaginarity(rho)}); break;
    case Theory::entanglement: r.verdicts.push_back({"global", is_free_entanglement_all_cuts(rho)}); break;
    case Theory::discord:
    case Theory::locality: {
      std::size_t first = 0;
      for (std::size_t k = 0; k < r.receiver_systems.size(); ++k) {
        const DimSignature& sys = r.receiver_systems[k];
        const auto keep = factor_range(first, sys.size());
        first += sys.size();
        const DensityOperator local(partial_trace(rho.matrix(), rho.signature(), keep), sys);
        const std::string scope = "B" + std::to_string(k + 1);
        if (r.theory == Theory::discord) {
          if (sys.size() != 2) throw UnsupportedError("discord verdicts need bipartite receiver systems");
          ResourceVerdict v = is_classical_quantum(local, 0);
          if (sys == DimSignature{2, 2}) {
            v.witness_value = discord(local, 0);
            v.witness = "discord (nats) measured on the first factor";
          }
          r.verdicts.push_back({scope, v});
        } else {
          if (!(sys == DimSignature{2, 2})) throw UnsupportedError("locality verdicts need two-qubit receiver systems");
          const ResourceVerdict v = is_free_locality(local);
          r.verdicts.push_back({scope, v});
          const ResourceVerdict ppt = is_free_entanglement(local);
          if (v.is_free && !ppt.is_free) {
            r.activation_risk = true;
            std::string note = scope + ": entangled (partial-transpose eigenvalue " + detail::num(ppt.witness_value) +
                               ") without CHSH violation; copies of it may be nonlocal";
            if (const auto p = isotropic_parameter(local)) {
              const auto window = isotropic_local_range(2);
              note += "; isotropic with p = " + detail::num(*p) + ", local window (" + window.lower_exact->str() + ", " +
                      window.upper_exact->str() + "]";
              if (*p > window.lower && *p <= window.upper + 1e-12) note += " contains p";
            }
            r.notes.push_back(note);
          }
        }
      }
      break;
    }
  }
  r.breach = false;
  for (const auto& v : r.verdicts)
    if (v.verdict.decisive && !v.verdict.is_free) r.breach = true;
  for (const auto& v : r.verdicts)
    if (!v.verdict.decisive) r.notes.push_back(v.scope + ": " + v.verdict.witness + " is a necessary condition only");
}

// Largest resource witness produced by the noise on sampled free single-factor states.
inline double noise_generation_defect(Theory theory, const NoiseSpec& spec, std::size_t d, Rng& rng, int samples) {
  const KrausChannel ch = noise_channel(spec, d);
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    if (theory == Theory::coherence) {
      std::vector<double> p(d);
      double total = 0.0;
      for (double& x : p) total += (x = rng.uniform() + 1e-3);
      for (double& x : p) x /= total;
      worst = std::max(worst, is_free_coherence(ch.apply(diagonal_state(p))).witness_value);
    } else if (theory == Theory::imaginarity) {
      worst = std::max(worst, is_free_imaginarity(ch.apply(random_real_density(DimSignature::single(d), d, rng))).witness_value);
    }
  }
  return worst;
}

}  // namespace detail

[[nodiscard]] inline ConditionalRDChannel scenario_channel(const NetworkScenario& sc) {
  ConditionalRDChannel ch(sc.theory, sc.channel_kind);
  for (const auto& s : sc.strategies) {
    if (s.claimed) ch.add(*s.claimed);
    for (const auto& list : s.claims)
      for (const auto& d : list) ch.add(d);
  }
  return ch;
}

[[nodiscard]] inline CensorshipReport run_protocol(const NetworkScenario& sc) {
  if (sc.strategies.empty()) throw DimensionError("scenario has no senders");
  const ConditionalRDChannel ch = scenario_channel(sc);
  CensorshipReport report;
  report.theory = sc.theory;

  if (sc.noise) {
    Rng rng(sc.seed, sc.rng_algorithm);
    std::vector<std::size_t> seen;
    for (const auto& s : sc.strategies) {
      const auto sigs = s.kind == StrategyKind::correlated ? s.systems : std::vector<DimSignature>{s.state->signature()};
      for (const auto& sig : sigs)
        for (std::size_t d : sig.dims())
          if (std::find(seen.begin(), seen.end(), d) == seen.end()) seen.push_back(d);
    }
    for (std::size_t d : seen) {
      const double defect = detail::noise_generation_defect(sc.theory, *sc.noise, d, rng, 50);
      if (defect > kTolFree) {
        report.notes.push_back("link noise '" + sc.noise->kind + "' creates " + std::string(to_string(sc.theory)) +
                               " on sampled free states (witness " + detail::num(defect) + ")");
      }
    }
  }

  std::optional<DensityOperator> receiver;
  std::size_t sender = 0;
  for (const auto& s : sc.strategies) {
    Matrix out;
    DimSignature out_sig;
    if (s.kind == StrategyKind::correlated) {
      if (!s.joint) throw DimensionError("correlated strategy without a joint state");
      RegisterLayout layout;
      for (std::size_t k = 0; k < s.systems.size(); ++k) {
        SenderRegister reg{s.claims[k].size(), {}, s.systems[k]};
        for (const auto& d : s.claims[k]) reg.label_index.push_back(ch.index_of(d.label));
        layout.push_back(std::move(reg));
      }
      Matrix joint = s.joint->matrix();
      const DimSignature jsig = joint_signature(layout);
      if (sc.noise) {
        std::size_t pos = 0;
        for (const auto& reg : layout) {
          joint = apply_link_noise(*sc.noise, joint, jsig, pos + 1, reg.system.size());
          pos += 1 + reg.system.size();
        }
      }
      out = apply_censorship(ch, joint, layout);
      out_sig = system_signature(layout);
      for (const auto& sys : s.systems) report.receiver_systems.push_back(sys);
      sender += s.systems.size();
    } else {
      if (!s.state || !s.claimed) throw DimensionError("sender strategy needs a state and a claimed description");
      if (s.kind == StrategyKind::honest && sc.theory != Theory::entanglement &&
          encode_description(sc.theory, *s.state, sc.channel_kind).label != s.claimed->label) {
        throw DomainError("honest sender " + std::to_string(sender + 1) + " claims a description of another state");
      }
      const DimSignature& sig = s.state->signature();
      Matrix sent = s.state->matrix();
      if (sc.noise) sent = apply_link_noise(*sc.noise, sent, sig, 0, sig.size());
      const std::size_t index = ch.index_of(s.claimed->label);
      out = ch.branch(index, sig).apply(sent);
      out_sig = sig;
      report.receiver_systems.push_back(sig);
      ++sender;
      if (sc.noise && s.kind == StrategyKind::honest) {
        report.distances.push_back({sender, hs_distance(s.state->matrix(), sent), hs_distance(s.state->matrix(), out)});
      }
    }
    DensityOperator part(std::move(out), out_sig);
    receiver = receiver ? tensor(*receiver, part) : part;
  }
  report.receiver_state = *receiver;
  detail::assess(report);
  return report;
}

/// Eigen-dephasing built from the description of isotropic(2, 1/3), a
/// separable state whose top eigenvector is φ⁺: the branch lets φ⁺ through.
[[nodiscard]] inline CensorshipReport smuggle_eigenstate_demo() {
  const DensityOperator sigma = isotropic(2, 1.0 / 3.0);
  const Description d = describe_state(Theory::entanglement, sigma);
  const KrausChannel branch = make_branch(d, ChannelKind::eigen_dephasing);
  CensorshipReport r;
  r.theory = Theory::entanglement;
  r.receiver_state = branch.apply(bell_phi_plus(2));
  r.receiver_systems = {sigma.signature()};
  detail::assess(r);
  const double fixed = max_abs_diff(branch.apply(sigma).matrix(), sigma.matrix());
  r.notes.push_back("branch fixes the described state up to " + detail::num(fixed));
  r.notes.push_back("the described state is separable: partial-transpose eigenvalue " +
                    detail::num(is_free_entanglement(sigma).witness_value));
  return r;
}

/// Hilbert–Schmidt distances of σ to its noisy image Φ(σ) and to the censored
/// image Δ(Φ(σ)).
[[nodiscard]] inline NoiseDistances noise_comparison(Theory theory, const DensityOperator& sigma,
                                                     const KrausChannel& noise, const KrausChannel& branch,
                                                     std::uint64_t seed = 0) {
  detail::require_free(theory, sigma);
  if (theory == Theory::coherence || theory == Theory::imaginarity) {
    Rng rng(seed);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      const DensityOperator sample = theory == Theory::imaginarity
                                         ? random_real_density(sigma.signature(), sigma.dim(), rng)
                                         : computational_dephasing(sigma.signature()).apply(random_density(sigma.signature(), sigma.dim(), rng));
      const DensityOperator image = noise.apply(sample);
      worst = std::max(worst, theory == Theory::imaginarity ? is_free_imaginarity(image).witness_value
                                                            : is_free_coherence(image).witness_value);
    }
    if (worst > kTolFree) throw DomainError("noise channel creates resources from free states");
  }
  const Matrix noisy = noise.apply(sigma.matrix());
  const Matrix censored = branch.apply(noisy);
  return {1, hs_distance(sigma.matrix(), noisy), hs_distance(sigma.matrix(), censored)};
}

}  // namespace qcensor
