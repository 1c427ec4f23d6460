#pragma once

// JSON forms of states, ensembles, descriptions, scenarios and reports.
//
// State:     {"dims": [2, 2], "re": [[...], ...], "im": [[...], ...]}   ("im" optional)
// Ensemble:  [{"weight": w, "factors": [{"re": [...], "im": [...]}, ...]}, ...]
// Scenario:  {"theory", "channel_kind", "seed", "rng"?, "noise": {"kind", "params"} | null,
//             "senders": [...]}. Sender forms are listed in the README.

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcensor/errors.hpp"
#include "qcensor/protocol.hpp"

namespace qcensor {

using Json = nlohmann::ordered_json;

/// Malformed JSON input (as opposed to a failure while computing).
class FormatError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(where + ": missing field '" + key + "'");
  return j.at(key);
}

inline double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw FormatError(where + ": expected a number");
  return j.get<double>();
}

inline std::vector<std::size_t> dims_from(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw FormatError(where + ": dims must be a non-empty array");
  std::vector<std::size_t> dims;
  for (const auto& d : j) {
    if (!d.is_number_integer() || d.get<long long>() < 2) throw FormatError(where + ": each dimension must be an integer >= 2");
    dims.push_back(d.get<std::size_t>());
  }
  return dims;
}

inline Json matrix_part(const Matrix& m, bool imag) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(imag ? m(i, j).imag() : m(i, j).real());
    rows.push_back(std::move(row));
  }
  return rows;
}

inline void read_part(const Json& rows, Matrix& m, bool imag, const std::string& where) {
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != m.rows()) {
    throw FormatError(where + ": matrix must have " + std::to_string(m.rows()) + " rows");
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const Json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != m.cols()) {
      throw FormatError(where + ": row " + std::to_string(i) + " must have " + std::to_string(m.cols()) + " entries");
    }
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double x = number(row[static_cast<std::size_t>(j)], where);
      if (imag) m(i, j).imag(x);
      else m(i, j).real(x);
    }
  }
}

}  // namespace detail

[[nodiscard]] inline Json to_json(const DensityOperator& rho) {
  return Json{{"dims", rho.signature().dims()},
              {"re", detail::matrix_part(rho.matrix(), false)},
              {"im", detail::matrix_part(rho.matrix(), true)}};
}

[[nodiscard]] inline DensityOperator state_from_json(const Json& j, const std::string& where = "state") {
  const DimSignature sig(detail::dims_from(detail::field(j, "dims", where), where));
  const auto n = static_cast<Eigen::Index>(sig.total());
  Matrix m = Matrix::Zero(n, n);
  detail::read_part(detail::field(j, "re", where), m, false, where + ".re");
  if (j.contains("im")) detail::read_part(j.at("im"), m, true, where + ".im");
  try {
    return DensityOperator(std::move(m), sig);
  } catch (const InvalidStateError& e) {
    throw FormatError(where + ": " + e.what());
  }
}

[[nodiscard]] inline Json to_json(const Vector& v) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return Json{{"re", re}, {"im", im}};
}

[[nodiscard]] inline Vector vector_from_json(const Json& j, const std::string& where) {
  // Either a plain real array or {"re": [...], "im": [...]}.
  const Json& re = j.is_array() ? j : detail::field(j, "re", where);
  if (!re.is_array() || re.size() < 2) throw FormatError(where + ": amplitudes must have at least 2 entries");
  Vector v(static_cast<Eigen::Index>(re.size()));
  for (std::size_t i = 0; i < re.size(); ++i) v(static_cast<Eigen::Index>(i)) = detail::number(re[i], where);
  if (j.is_object() && j.contains("im")) {
    const Json& im = j.at("im");
    if (!im.is_array() || im.size() != re.size()) throw FormatError(where + ": 'im' must match 're' in length");
    for (std::size_t i = 0; i < im.size(); ++i)
      v(static_cast<Eigen::Index>(i)) += Complex(0.0, detail::number(im[i], where));
  }
  return v;
}

[[nodiscard]] inline Json to_json(const ProductEnsemble& ens) {
  Json out = Json::array();
  for (const auto& term : ens) {
    Json factors = Json::array();
    for (const Vector& f : term.factors) factors.push_back(to_json(f));
    out.push_back(Json{{"weight", term.weight}, {"factors", factors}});
  }
  return out;
}

[[nodiscard]] inline ProductEnsemble ensemble_from_json(const Json& j, const std::string& where = "ensemble") {
  if (!j.is_array() || j.empty()) throw FormatError(where + ": ensemble must be a non-empty array");
  ProductEnsemble ens;
  for (std::size_t t = 0; t < j.size(); ++t) {
    const std::string w = where + "[" + std::to_string(t) + "]";
    EnsembleTerm term;
    term.weight = detail::number(detail::field(j[t], "weight", w), w);
    const Json& factors = detail::field(j[t], "factors", w);
    if (!factors.is_array() || factors.empty()) throw FormatError(w + ": factors must be a non-empty array");
    for (const auto& f : factors) term.factors.push_back(vector_from_json(f, w + ".factors"));
    ens.push_back(std::move(term));
  }
  try {
    (void)ensemble_signature(ens);
  } catch (const DimensionError& e) {
    throw FormatError(where + ": " + e.what());
  }
  return ens;
}

[[nodiscard]] inline Json to_json(const Description& d) {
  Json re = Json::array(), im = Json::array();
  for (const Complex& z : d.payload) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  return Json{{"theory", to_string(d.theory)},
              {"format", to_string(d.format)},
              {"dims", d.sig.dims()},
              {"label", d.label},
              {"payload", Json{{"re", re}, {"im", im}}}};
}

[[nodiscard]] inline Json to_json(const ResourceVerdict& v) {
  return Json{{"is_free", v.is_free}, {"witness", v.witness}, {"witness_value", v.witness_value}, {"decisive", v.decisive}};
}

[[nodiscard]] inline Json to_json(const CensorshipReport& r) {
  Json verdicts = Json::array();
  for (const auto& v : r.verdicts) {
    Json e = to_json(v.verdict);
    e["scope"] = v.scope;
    verdicts.push_back(std::move(e));
  }
  Json systems = Json::array();
  for (const auto& s : r.receiver_systems) systems.push_back(s.dims());
  Json distances = nullptr;
  if (!r.distances.empty()) {
    distances = Json::array();
    for (const auto& d : r.distances)
      distances.push_back(Json{{"sender", d.sender}, {"d_noisy", d.d_noisy}, {"d_censored", d.d_censored}});
  }
  return Json{{"theory", to_string(r.theory)},
              {"receiver_state", to_json(r.receiver_state)},
              {"receiver_systems", systems},
              {"verdicts", verdicts},
              {"breach", r.breach},
              {"activation_risk", r.activation_risk},
              {"distances", distances},
              {"notes", r.notes}};
}

namespace detail {

inline Description claim_from_json(const Json& j, Theory theory, ChannelKind kind, const std::string& where) {
  try {
    if (j.contains("ensemble")) return encode_description(ensemble_from_json(j.at("ensemble"), where + ".ensemble"));
    if (j.contains("state")) return encode_description(theory, state_from_json(j.at("state"), where + ".state"), kind);
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(where + ": " + e.what());
  }
  throw FormatError(where + ": a claim needs 'state' or 'ensemble'");
}

inline NoiseSpec noise_from_json(const Json& j) {
  NoiseSpec spec;
  spec.kind = field(j, "kind", "noise").get<std::string>();
  const Json params = j.contains("params") && !j.at("params").is_null() ? j.at("params") : Json::object();
  auto param = [&](const char* key) { return number(field(params, key, "noise.params"), "noise.params"); };
  if (spec.kind == "identity") spec.param = 0.0;
  else if (spec.kind == "depolarizing") spec.param = param("strength");
  else if (spec.kind == "amplitude_damping") spec.param = param("gamma");
  else if (spec.kind == "dephasing" || spec.kind == "replacement") spec.param = param("probability");
  else throw FormatError("noise: unknown kind '" + spec.kind + "'");
  if (!(spec.param >= 0.0 && spec.param <= 1.0)) throw FormatError("noise: parameter must lie in [0, 1]");
  return spec;
}

inline SenderStrategy sender_from_json(const Json& j, Theory theory, ChannelKind kind, const std::string& where) {
  const std::string k = field(j, "kind", where).get<std::string>();
  try {
    if (k == "honest") {
      SenderStrategy s = j.contains("ensemble") ? honest_sender(ensemble_from_json(j.at("ensemble"), where + ".ensemble"))
                                                : honest_sender(theory, state_from_json(field(j, "state", where), where + ".state"), kind);
      if (j.contains("claimed")) s.claimed = claim_from_json(j.at("claimed"), theory, kind, where + ".claimed");
      return s;
    }
    if (k == "untruthful") {
      const DensityOperator state = j.contains("ensemble") ? ensemble_state(ensemble_from_json(j.at("ensemble"), where + ".ensemble"))
                                                           : state_from_json(field(j, "state", where), where + ".state");
      return untruthful_sender(state, claim_from_json(field(j, "claimed", where), theory, kind, where + ".claimed"));
    }
    if (k == "correlated") {
      if (j.contains("mixture")) {
        const Json& mix = j.at("mixture");
        if (!mix.is_array()) throw FormatError(where + ".mixture: expected an array");
        std::vector<double> weights;
        std::vector<DensityOperator> states;
        std::vector<Description> claims;
        for (std::size_t b = 0; b < mix.size(); ++b) {
          const std::string w = where + ".mixture[" + std::to_string(b) + "]";
          weights.push_back(number(field(mix[b], "weight", w), w));
          if (mix[b].contains("ensemble")) {
            const auto ens = ensemble_from_json(mix[b].at("ensemble"), w + ".ensemble");
            states.push_back(ensemble_state(ens));
            claims.push_back(mix[b].contains("claimed") ? claim_from_json(mix[b].at("claimed"), theory, kind, w + ".claimed")
                                                        : encode_description(ens));
          } else {
            states.push_back(state_from_json(field(mix[b], "state", w), w + ".state"));
            claims.push_back(mix[b].contains("claimed") ? claim_from_json(mix[b].at("claimed"), theory, kind, w + ".claimed")
                                                        : encode_description(theory, states.back(), kind));
          }
        }
        return mixture_sender(weights, states, claims);
      }
      const DensityOperator joint = state_from_json(field(j, "joint", where), where + ".joint");
      const Json& systems = field(j, "systems", where);
      const Json& claims = field(j, "claims", where);
      if (!systems.is_array() || !claims.is_array() || systems.size() != claims.size()) {
        throw FormatError(where + ": 'systems' and 'claims' must be arrays of equal length");
      }
      std::vector<DimSignature> sigs;
      std::vector<std::vector<Description>> lists;
      for (std::size_t s = 0; s < systems.size(); ++s) {
        sigs.emplace_back(dims_from(systems[s], where + ".systems"));
        std::vector<Description> list;
        for (std::size_t c = 0; c < claims[s].size(); ++c)
          list.push_back(claim_from_json(claims[s][c], theory, kind,
                                         where + ".claims[" + std::to_string(s) + "][" + std::to_string(c) + "]"));
        lists.push_back(std::move(list));
      }
      return correlated_senders(joint, std::move(sigs), std::move(lists));
    }
  } catch (const FormatError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(where + ": " + e.what());
  } catch (const Error& e) {
    throw FormatError(where + ": " + e.what());
  }
  throw FormatError(where + ": unknown sender kind '" + k + "' (expected honest, untruthful or correlated)");
}

}  // namespace detail

[[nodiscard]] inline NetworkScenario scenario_from_json(const Json& j) {
  try {
    NetworkScenario sc;
    try {
      sc.theory = parse_theory(detail::field(j, "theory", "scenario").get<std::string>());
      sc.channel_kind = parse_channel_kind(j.value("channel_kind", std::string("replacement")));
      if (!kind_allowed(sc.theory, sc.channel_kind)) {
        (void)ConditionalRDChannel(sc.theory, sc.channel_kind);  // throws with the explanation
      }
    } catch (const DomainError& e) {
      throw FormatError(std::string("scenario: ") + e.what());
    }
    if (j.contains("seed")) {
      if (!j.at("seed").is_number_unsigned()) throw FormatError("scenario: seed must be a non-negative integer");
      sc.seed = j.at("seed").get<std::uint64_t>();
    }
    sc.rng_algorithm = j.value("rng", std::string(Rng::kDefaultAlgorithm));
    try {
      (void)Rng(0, sc.rng_algorithm);
    } catch (const DomainError& e) {
      throw FormatError(std::string("scenario: ") + e.what());
    }
    if (j.contains("noise") && !j.at("noise").is_null()) sc.noise = detail::noise_from_json(j.at("noise"));
    const Json& senders = detail::field(j, "senders", "scenario");
    if (!senders.is_array() || senders.empty()) throw FormatError("scenario: senders must be a non-empty array");
    for (std::size_t k = 0; k < senders.size(); ++k) {
      sc.strategies.push_back(detail::sender_from_json(senders[k], sc.theory, sc.channel_kind, "senders[" + std::to_string(k) + "]"));
    }
    return sc;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("scenario: ") + e.what());
  }
}

[[nodiscard]] inline Json to_json(const NetworkScenario& sc) {
  Json senders = Json::array();
  for (const auto& s : sc.strategies) {
    Json e{{"kind", to_string(s.kind)}};
    if (s.kind == StrategyKind::correlated) {
      e["joint"] = to_json(*s.joint);
      Json systems = Json::array(), claims = Json::array();
      for (const auto& sig : s.systems) systems.push_back(sig.dims());
      for (const auto& list : s.claims) {
        Json l = Json::array();
        for (const auto& d : list) {
          if (d.format == PayloadFormat::product_ensemble) l.push_back(Json{{"ensemble", to_json(described_ensemble(d))}});
          else l.push_back(Json{{"state", to_json(described_state(d))}});
        }
        claims.push_back(std::move(l));
      }
      e["systems"] = systems;
      e["claims"] = claims;
    } else {
      e["state"] = to_json(*s.state);
      if (s.claimed->format == PayloadFormat::product_ensemble) {
        e["claimed"] = Json{{"ensemble", to_json(described_ensemble(*s.claimed))}};
      } else if (s.claimed->format != PayloadFormat::real_eigenbasis) {
        e["claimed"] = Json{{"state", to_json(described_state(*s.claimed))}};
      }
    }
    senders.push_back(std::move(e));
  }
  Json noise = nullptr;
  if (sc.noise) {
    const char* key = sc.noise->kind == "depolarizing"        ? "strength"
                      : sc.noise->kind == "amplitude_damping" ? "gamma"
                                                              : "probability";
    noise = Json{{"kind", sc.noise->kind}, {"params", Json::object()}};
    if (sc.noise->kind != "identity") noise["params"][key] = sc.noise->param;
  }
  return Json{{"theory", to_string(sc.theory)},
              {"channel_kind", to_string(sc.channel_kind)},
              {"seed", sc.seed},
              {"rng", sc.rng_algorithm},
              {"noise", noise},
              {"senders", senders}};
}

/// Fixed-width rendering with 4 significant digits.
[[nodiscard]] inline std::string format_sig4(double x) {
  if (std::abs(x) < 5e-13) x = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

[[nodiscard]] inline std::string format_complex(const Complex& z) {
  const double re = std::abs(z.real()) < 5e-13 ? 0.0 : z.real();
  const double im = std::abs(z.imag()) < 5e-13 ? 0.0 : z.imag();
  if (im == 0.0) return format_sig4(re);
  if (re == 0.0) return format_sig4(im) + "i";
  return format_sig4(re) + (im < 0 ? "-" : "+") + format_sig4(std::abs(im)) + "i";
}

[[nodiscard]] inline std::string pretty_matrix(const Matrix& m, const std::string& indent = "  ") {
  std::vector<std::string> cells;
  std::size_t width = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      cells.push_back(format_complex(m(i, j)));
      width = std::max(width, cells.back().size());
    }
  std::ostringstream os;
  std::size_t c = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    os << indent << "[";
    for (Eigen::Index j = 0; j < m.cols(); ++j, ++c) {
      os << (j ? "  " : " ") << std::string(width - cells[c].size(), ' ') << cells[c];
    }
    os << " ]\n";
  }
  return os.str();
}

[[nodiscard]] inline std::string pretty(const CensorshipReport& r) {
  std::ostringstream os;
  os << "theory: " << to_string(r.theory) << "\n";
  os << "receiver state " << r.receiver_state.signature().str() << ":\n" << pretty_matrix(r.receiver_state.matrix());
  os << "verdicts:\n";
  for (const auto& v : r.verdicts) {
    os << "  " << v.scope << ": " << (v.verdict.is_free ? "free" : "resource") << (v.verdict.decisive ? "" : " (not decisive)")
       << ", " << v.verdict.witness << " = " << format_sig4(v.verdict.witness_value);
    if (v.verdict.witness.rfind("discord", 0) == 0) os << " (" << format_sig4(nats_to_bits(v.verdict.witness_value)) << " bits)";
    os << "\n";
  }
  for (const auto& d : r.distances) {
    os << "  sender " << d.sender << ": d_noisy = " << format_sig4(d.d_noisy) << ", d_censored = " << format_sig4(d.d_censored)
       << "\n";
  }
  os << "breach: " << (r.breach ? "yes" : "no") << "\n";
  if (r.activation_risk) os << "activation risk: yes\n";
  for (const auto& n : r.notes) os << "note: " << n << "\n";
  return os.str();
}

}  // namespace qcensor
