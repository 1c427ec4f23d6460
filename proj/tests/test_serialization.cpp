#include <catch2/catch_amalgamated.hpp>

#include "qcensor/serialization.hpp"
#include "test_support.hpp"

using namespace qcensor;

namespace {

DensityOperator diag22(const std::vector<double>& p) { return DensityOperator(diagonal_state(p).matrix(), DimSignature{2, 2}); }

}  // namespace

TEST_CASE("state round trip", "[serialization]") {
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const auto rho = random_density(DimSignature{2, 3}, 1 + rng.below(6), rng);
    const auto back = state_from_json(Json::parse(to_json(rho).dump()));
    CHECK(back.signature() == rho.signature());
    CHECK(max_abs_diff(back.matrix(), rho.matrix()) == 0.0);
  }
}

TEST_CASE("state without imaginary part", "[serialization]") {
  const auto j = Json::parse(R"({"dims": [2], "re": [[0.5, 0.5], [0.5, 0.5]]})");
  CHECK(max_abs_diff(state_from_json(j).matrix(), from_pure(plus_ket()).matrix()) < 1e-15);
}

TEST_CASE("malformed states are rejected", "[serialization]") {
  const char* bad[] = {
      R"({"re": [[1]]})",
      R"({"dims": [], "re": []})",
      R"({"dims": [1], "re": [[1]]})",
      R"({"dims": [2], "re": [[1, 0]]})",
      R"({"dims": [2], "re": [[1, 0], [0]]})",
      R"({"dims": [2], "re": [[1, "x"], [0, 0]]})",
      R"({"dims": [2], "re": [[0.5, 0], [0, 0.6]]})",
      R"({"dims": [2], "re": [[1.5, 0], [0, -0.5]]})",
      R"({"dims": [2], "re": [[0.5, 0.1], [0.2, 0.5]]})",
  };
  for (const char* text : bad) {
    INFO(text);
    CHECK_THROWS_AS(state_from_json(Json::parse(text)), FormatError);
  }
}

TEST_CASE("ensemble round trip", "[serialization]") {
  const ProductEnsemble ens = {{0.25, {plus_ket(), basis_ket(3, 2)}}, {0.75, {minus_ket(), basis_ket(3, 0)}}};
  const auto back = ensemble_from_json(Json::parse(to_json(ens).dump()));
  REQUIRE(back.size() == 2);
  CHECK(max_abs_diff(ensemble_state(back).matrix(), ensemble_state(ens).matrix()) == 0.0);
  CHECK(encode_description(back).label == encode_description(ens).label);

  CHECK_THROWS_AS(ensemble_from_json(Json::parse(R"([])")), FormatError);
  CHECK_THROWS_AS(ensemble_from_json(Json::parse(R"([{"weight": 1, "factors": [[1]]}])")), FormatError);
  CHECK_THROWS_AS(ensemble_from_json(Json::parse(R"([{"weight": 0.5, "factors": [[1, 0]]}, {"weight": 0.5, "factors": [[1, 0, 0]]}])")),
                  FormatError);
}

TEST_CASE("scenario round trip", "[serialization]") {
  Rng rng(12);
  NetworkScenario sc;
  sc.theory = Theory::discord;
  sc.seed = 99;
  sc.noise = NoiseSpec{"depolarizing", 0.25};
  const auto a = random_density(DimSignature{2, 2}, 2, rng);
  const auto b = random_density(DimSignature{2, 2}, 2, rng);
  sc.strategies = {honest_sender(Theory::discord, diag22({0.1, 0.2, 0.3, 0.4}),
                                 ChannelKind::replacement),
                   untruthful_sender(a, encode_description(Theory::discord, diag22({0.25, 0.25, 0.25, 0.25}))),
                   correlated_senders(tensor(announce(2, 0, a), announce(2, 1, b)), {DimSignature{2, 2}, DimSignature{2, 2}},
                                      {{encode_description(Theory::discord, diag22({0.5, 0, 0, 0.5})),
                                        encode_description(Theory::discord, diag22({0, 0.5, 0.5, 0}))},
                                       {encode_description(Theory::discord, diag22({1, 0, 0, 0})),
                                        encode_description(Theory::discord, diag22({0, 0, 0, 1}))}})};
  const Json j = to_json(sc);
  const auto back = scenario_from_json(Json::parse(j.dump()));
  CHECK(to_json(back).dump() == j.dump());
  CHECK(back.seed == 99);
  REQUIRE(back.noise);
  CHECK(back.noise->param == 0.25);

  const auto r1 = run_protocol(sc);
  const auto r2 = run_protocol(back);
  CHECK(to_json(r1).dump() == to_json(r2).dump());
}

TEST_CASE("malformed scenarios are rejected", "[serialization]") {
  const std::string state = R"({"dims": [2], "re": [[1, 0], [0, 0]]})";
  const std::string bad[] = {
      R"({})",
      R"({"theory": "magic", "senders": []})",
      R"({"theory": "coherence", "senders": []})",
      R"({"theory": "coherence", "senders": [{"kind": "bribed", "state": )" + state + "}]}",
      R"({"theory": "coherence", "senders": [{"kind": "honest"}]})",
      R"({"theory": "coherence", "senders": [{"kind": "untruthful", "state": )" + state + "}]}",
      R"({"theory": "entanglement", "channel_kind": "eigen_dephasing", "senders": [{"kind": "honest", "state": )" + state + "}]}",
      R"({"theory": "coherence", "noise": {"kind": "bitflip"}, "senders": [{"kind": "honest", "state": )" + state + "}]}",
      R"({"theory": "coherence", "noise": {"kind": "depolarizing", "params": {"strength": 2}}, "senders": [{"kind": "honest", "state": )" +
          state + "}]}",
      R"({"theory": "coherence", "seed": -4, "senders": [{"kind": "honest", "state": )" + state + "}]}",
      R"({"theory": "coherence", "rng": "xorshift", "senders": [{"kind": "honest", "state": )" + state + "}]}",
      R"({"theory": "entanglement", "senders": [{"kind": "honest", "state": )" + state + "}]}",
      R"({"theory": "coherence", "senders": [{"kind": 3}]})",
  };
  for (const auto& text : bad) {
    INFO(text);
    CHECK_THROWS_AS(scenario_from_json(Json::parse(text)), FormatError);
  }
}

TEST_CASE("report json", "[serialization]") {
  NetworkScenario sc;
  sc.theory = Theory::coherence;
  sc.noise = NoiseSpec{"depolarizing", 0.5};
  sc.strategies = {honest_sender(Theory::coherence, diagonal_state({0.2, 0.8}), ChannelKind::replacement)};
  const Json j = to_json(run_protocol(sc));
  CHECK(j.at("breach") == false);
  CHECK(j.at("verdicts").size() == 1);
  CHECK(j.at("distances").size() == 1);
  CHECK(j.at("distances")[0].at("sender") == 1);
  const auto rho = state_from_json(j.at("receiver_state"));
  CHECK(rho.signature() == DimSignature{2});
}

TEST_CASE("pretty formatting", "[serialization]") {
  CHECK(format_sig4(0.123456) == "0.1235");
  CHECK(format_sig4(1e-14) == "0");
  CHECK(format_complex(Complex(0.5, -0.25)) == "0.5-0.25i");
  CHECK(format_complex(Complex(0.0, 1.0)) == "1i");
  const auto text = pretty(smuggle_eigenstate_demo());
  CHECK(text.find("breach: yes") != std::string::npos);
  CHECK(text.find("-0.5") != std::string::npos);
}
