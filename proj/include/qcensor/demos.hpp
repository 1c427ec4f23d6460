#pragma once

// Named fixed constructions, each returning a JSON summary and readable text.

#include <string>
#include <vector>

#include "qcensor/serialization.hpp"

namespace qcensor {

struct DemoResult {
  std::string name;
  Json summary;
  std::string text;
};

inline const std::vector<std::string>& demo_names() {
  static const std::vector<std::string> names = {"bell_filter", "eigen_smuggle", "discord_breach", "nonlocal_activation",
                                                 "noise_correction"};
  return names;
}

/// (|HH⟩+|VV⟩)/√2 claimed as |+−⟩ is replaced by |+−⟩⟨+−|; an honest |+−⟩ passes.
[[nodiscard]] inline DemoResult demo_bell_filter() {
  const ProductEnsemble plus_minus = {{1.0, {plus_ket(), minus_ket()}}};
  const Description claim = encode_description(plus_minus);
  NetworkScenario liar;
  liar.theory = Theory::entanglement;
  liar.strategies = {untruthful_sender(bell_phi_plus(2), claim)};
  NetworkScenario honest = liar;
  honest.strategies = {honest_sender(plus_minus)};
  const auto r1 = run_protocol(liar);
  const auto r2 = run_protocol(honest);
  const Matrix target = ensemble_state(plus_minus).matrix();
  const double dev1 = max_abs_diff(r1.receiver_state.matrix(), target);
  const double dev2 = max_abs_diff(r2.receiver_state.matrix(), target);

  DemoResult d{"bell_filter", Json::object(), ""};
  d.summary["claimed_label"] = claim.label;
  d.summary["bell_input"] = to_json(r1);
  d.summary["honest_input"] = to_json(r2);
  d.summary["max_deviation_bell_input"] = dev1;
  d.summary["max_deviation_honest_input"] = dev2;
  d.text = "claimed description: " + claim.label + "\n\ninput (|HH>+|VV>)/sqrt2:\n" + pretty(r1) +
           "max |receiver - |+-><+-|| = " + format_sig4(dev1) + "\n\ninput |+->:\n" + pretty(r2) +
           "max |receiver - |+-><+-|| = " + format_sig4(dev2) + "\n";
  return d;
}

/// Eigen-dephasing in the eigenbasis of isotropic(2, 1/3) lets φ⁺ through.
[[nodiscard]] inline DemoResult demo_eigen_smuggle() {
  const auto r = smuggle_eigenstate_demo();
  const double dev = max_abs_diff(r.receiver_state.matrix(), bell_phi_plus(2).matrix());
  DemoResult d{"eigen_smuggle", Json::object(), ""};
  d.summary["report"] = to_json(r);
  d.summary["max_deviation_from_phi_plus"] = dev;
  d.text = "eigen-dephasing branch from isotropic(2, 1/3), input phi+:\n" + pretty(r) +
           "max |receiver - phi+| = " + format_sig4(dev) + "\n";
  return d;
}

[[nodiscard]] inline NetworkScenario discord_breach_scenario() {
  const auto s0 = from_pure(PureState{kron_ket(basis_ket(2, 0), basis_ket(2, 0)), DimSignature{2, 2}});
  const auto s1 = from_pure(PureState{kron_ket(plus_ket(), basis_ket(2, 1)), DimSignature{2, 2}});
  NetworkScenario sc;
  sc.theory = Theory::discord;
  sc.strategies.push_back(
      mixture_sender({0.5, 0.5}, {s0, s1}, {encode_description(Theory::discord, s0), encode_description(Theory::discord, s1)}));
  return sc;
}

/// ½|0⟩⟨0|⊗|0⟩⟨0| + ½|+⟩⟨+|⊗|1⟩⟨1| sent as a mixture of honest components.
[[nodiscard]] inline DemoResult demo_discord_breach() {
  const auto r = run_protocol(discord_breach_scenario());
  const auto s0 = from_pure(PureState{kron_ket(basis_ket(2, 0), basis_ket(2, 0)), DimSignature{2, 2}});
  const auto s1 = from_pure(PureState{kron_ket(plus_ket(), basis_ket(2, 1)), DimSignature{2, 2}});
  const double dq = discord(r.receiver_state, 0);
  const double d0 = discord(s0, 0), d1 = discord(s1, 0);
  DemoResult d{"discord_breach", Json::object(), ""};
  d.summary["report"] = to_json(r);
  d.summary["discord_receiver_nats"] = dq;
  d.summary["discord_components_nats"] = Json::array({d0, d1});
  d.text = pretty(r) + "discord of receiver state: " + format_sig4(dq) + " nats (" + format_sig4(nats_to_bits(dq)) +
           " bits)\ndiscord of components: " + format_sig4(d0) + ", " + format_sig4(d1) + " nats\n";
  return d;
}

/// N honest senders of isotropic(2, 5/12): each pair is entangled but has no
/// CHSH violation, and all pass unchanged.
[[nodiscard]] inline DemoResult demo_nonlocal_activation(std::size_t n = 2) {
  if (n < 1 || n > 4) throw DomainError("nonlocal_activation: n must be between 1 and 4");
  const auto window = isotropic_local_range(2);
  const auto sigma = isotropic(2, window.upper);
  NetworkScenario sc;
  sc.theory = Theory::locality;
  for (std::size_t k = 0; k < n; ++k) sc.strategies.push_back(honest_sender(Theory::locality, sigma, ChannelKind::replacement));
  const auto r = run_protocol(sc);
  const double m = chsh_parameter(sigma);
  const double npt = is_free_entanglement(sigma).witness_value;
  DemoResult d{"nonlocal_activation", Json::object(), ""};
  d.summary["n"] = n;
  d.summary["window"] = Json{{"lower", window.lower_exact->str()}, {"upper", window.upper_exact->str()}};
  d.summary["p"] = window.upper;
  d.summary["chsh_M_per_pair"] = m;
  d.summary["min_partial_transpose_eigenvalue"] = npt;
  d.summary["report"] = to_json(r);
  std::string text = "local window for d = 2: (" + window.lower_exact->str() + ", " + window.upper_exact->str() + "]\n";
  text += "sigma = isotropic(2, " + window.upper_exact->str() + "), N = " + std::to_string(n) + "\n";
  text += "per-pair CHSH M = " + format_sig4(m) + " (25/72 = " + format_sig4(25.0 / 72.0) + ")\n";
  text += "min partial-transpose eigenvalue = " + format_sig4(npt) + "\n";
  d.text = text + pretty(r);
  return d;
}

/// Amplitude damping on |+⟩ and on a real state, then the eigen-dephasing
/// branch of the sent state's description.
[[nodiscard]] inline DemoResult demo_noise_correction() {
  DemoResult d{"noise_correction", Json::array(), ""};
  Matrix m(2, 2);
  m << 0.7, 0.3, 0.3, 0.3;
  const std::vector<std::pair<std::string, DensityOperator>> states = {{"|+>", from_pure(plus_ket())},
                                                                        {"[[0.7,0.3],[0.3,0.3]]", DensityOperator(m, DimSignature{2})}};
  for (const auto& [name, sigma] : states) {
    const auto branch = make_branch(encode_description(Theory::imaginarity, sigma), ChannelKind::eigen_dephasing);
    for (double gamma : {0.1, 0.5, 0.9}) {
      const auto nd = noise_comparison(Theory::imaginarity, sigma, amplitude_damping(gamma), branch);
      d.summary.push_back(Json{{"state", name}, {"gamma", gamma}, {"d_noisy", nd.d_noisy}, {"d_censored", nd.d_censored}});
      d.text += "sigma = " + name + ", gamma = " + format_sig4(gamma) + ": d_noisy = " + format_sig4(nd.d_noisy) +
                ", d_censored = " + format_sig4(nd.d_censored) + "\n";
    }
  }
  return d;
}

[[nodiscard]] inline DemoResult run_demo(const std::string& name, std::size_t n = 2) {
  if (name == "bell_filter") return demo_bell_filter();
  if (name == "eigen_smuggle") return demo_eigen_smuggle();
  if (name == "discord_breach") return demo_discord_breach();
  if (name == "nonlocal_activation") return demo_nonlocal_activation(n);
  if (name == "noise_correction") return demo_noise_correction();
  std::string known;
  for (const auto& k : demo_names()) known += (known.empty() ? "" : ", ") + k;
  throw DomainError("unknown demo '" + name + "' (available: " + known + ")");
}

}  // namespace qcensor
