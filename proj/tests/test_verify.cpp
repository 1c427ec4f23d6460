#include <catch2/catch_amalgamated.hpp>

#include "qcensor/verify.hpp"

using namespace qcensor;

TEST_CASE("every suite passes at a small sample count", "[verify]") {
  for (const auto& name : suite_names()) {
    const auto r = run_suite(name, 10, 5);
    INFO(name);
    for (const auto& c : r.checks) {
      INFO(c.name << " observed " << c.observed << " bound " << c.bound);
      CHECK(c.passed());
    }
    CHECK(r.passed());
  }
}

TEST_CASE("suites are deterministic", "[verify]") {
  const auto a = run_suite("affine_unbreakable", 5, 17);
  const auto b = run_suite("affine_unbreakable", 5, 17);
  REQUIRE(a.checks.size() == b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) CHECK(a.checks[i].observed == b.checks[i].observed);
}

TEST_CASE("InvariantCheck direction", "[verify]") {
  InvariantCheck upper{"u", 0.0, 1.0, true, 0};
  CHECK_FALSE(upper.passed());
  upper.record(0.5);
  upper.record(0.9);
  CHECK(upper.observed == 0.9);
  CHECK(upper.passed());
  upper.record(1.1);
  CHECK_FALSE(upper.passed());

  InvariantCheck lower{"l", 0.0, 1.0, false, 0};
  lower.record(2.0);
  lower.record(1.5);
  CHECK(lower.observed == 1.5);
  CHECK(lower.passed());
}

TEST_CASE("unknown suite", "[verify]") { CHECK_THROWS_AS(run_suite("nope", 1, 1), DomainError); }
