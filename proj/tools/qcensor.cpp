// qcensor: run censorship scenarios, named demonstrations and verification suites.
//
// Exit codes: 0 no breach / suite passed, 3 breach detected, 2 usage error or
// malformed input, 1 runtime error or suite violation.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qcensor/demos.hpp"
#include "qcensor/serialization.hpp"
#include "qcensor/verify.hpp"

namespace {

using namespace qcensor;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBreach = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("QCENSOR_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  try {
    std::size_t pos = 0;
    const std::string s(raw);
    if (s.front() == '-') throw std::invalid_argument("negative");
    const auto value = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return value;
  } catch (const std::exception&) {
    throw UsageError(std::string("QCENSOR_SEED must be a non-negative integer, got '") + raw + "'");
  }
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
  out << text;
}

int cmd_run(const std::string& path, const std::string& out_path, const std::string& format) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read scenario file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(path + ": invalid JSON: " + e.what());
  }
  NetworkScenario sc;
  try {
    sc = scenario_from_json(j);
  } catch (const FormatError& e) {
    throw UsageError(path + ": " + e.what());
  }
  if (const auto seed = env_seed()) sc.seed = *seed;
  const auto report = run_protocol(sc);
  emit(format == "pretty" ? pretty(report) : to_json(report).dump(2) + "\n", out_path);
  return report.breach ? kExitBreach : kExitOk;
}

int cmd_demo(const std::string& name, std::size_t n, const std::string& format) {
  if (std::find(demo_names().begin(), demo_names().end(), name) == demo_names().end()) {
    std::string known;
    for (const auto& k : demo_names()) known += "  " + k + "\n";
    throw UsageError("unknown demo '" + name + "'; available demos:\n" + known);
  }
  const auto d = run_demo(name, n);
  std::cout << (format == "json" ? d.summary.dump(2) + "\n" : d.text);
  return kExitOk;
}

int cmd_verify(const std::string& suite, std::size_t samples, std::optional<std::uint64_t> seed, const std::string& format) {
  if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end()) {
    std::string known;
    for (const auto& k : suite_names()) known += "  " + k + "\n";
    throw UsageError("unknown suite '" + suite + "'; available suites:\n" + known);
  }
  if (!seed) seed = env_seed();
  const auto r = run_suite(suite, samples, seed.value_or(0));
  if (format == "json") {
    Json checks = Json::array();
    for (const auto& c : r.checks) {
      checks.push_back(Json{{"name", c.name},
                            {"observed", c.observed},
                            {"bound", c.bound},
                            {"direction", c.upper ? "<=" : ">="},
                            {"evaluations", c.evaluations},
                            {"passed", c.passed()}});
    }
    std::cout << Json{{"suite", r.suite}, {"samples", r.samples}, {"seed", r.seed}, {"passed", r.passed()},
                      {"checks", checks}, {"notes", r.notes}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "suite " << r.suite << " (samples " << r.samples << ", seed " << r.seed << ")\n";
    for (const auto& c : r.checks) {
      std::cout << "  [" << (c.passed() ? "ok" : "VIOLATED") << "] " << c.name << ": " << format_sig4(c.observed)
                << (c.upper ? " <= " : " >= ") << format_sig4(c.bound) << "\n";
    }
    for (const auto& n : r.notes) std::cout << "  note: " << n << "\n";
    std::cout << (r.passed() ? "PASS" : "FAIL") << "\n";
  }
  return r.passed() ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conditional resource-destroying censorship of quantum states"};
  app.require_subcommand(1, 1);

  std::string scenario, out_path, format = "json";
  auto* run = app.add_subcommand("run", "Run a scenario file and write the censorship report");
  run->add_option("--scenario", scenario, "Scenario JSON file")->required();
  run->add_option("--out", out_path, "Write the report here instead of stdout");
  run->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "pretty"}));

  std::string demo_name, demo_format = "pretty";
  std::size_t demo_n = 2;
  auto* demo = app.add_subcommand("demo", "Run a named demonstration");
  demo->add_option("name", demo_name, "bell_filter | eigen_smuggle | discord_breach | nonlocal_activation | noise_correction")
      ->required();
  demo->add_option("--n", demo_n, "Number of senders for nonlocal_activation")->check(CLI::Range(1, 4));
  demo->add_option("--format", demo_format, "Output format")->check(CLI::IsMember({"json", "pretty"}));

  std::string suite, verify_format = "pretty";
  std::size_t samples = 200;
  std::optional<std::uint64_t> seed;
  auto* verify = app.add_subcommand("verify", "Run a seeded invariant suite");
  verify->add_option("--suite", suite, "affine_unbreakable | convex_unbreakable | discord_breach | activation | channel_axioms")
      ->required();
  verify->add_option("--samples", samples, "Number of random samples")->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed, "Seed (default: QCENSOR_SEED or 0)");
  verify->add_option("--format", verify_format, "Output format")->check(CLI::IsMember({"json", "pretty"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*run) return cmd_run(scenario, out_path, format);
    if (*demo) return cmd_demo(demo_name, demo_n, demo_format);
    return cmd_verify(suite, samples, seed, verify_format);
  } catch (const UsageError& e) {
    std::cerr << "qcensor: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "qcensor: error: " << e.what() << "\n";
    return kExitError;
  }
}
