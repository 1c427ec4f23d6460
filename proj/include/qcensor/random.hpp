#pragma once

// Seedable, splittable pseudorandom source with bit-reproducible output.
//
// Only the raw 64-bit engines are taken from the standard library (their
// output sequences are fully specified). Uniform and Gaussian variates are
// derived here so that results do not depend on the standard library vendor.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <variant>

#include "qcensor/errors.hpp"

namespace qcensor {

/// SplitMix64 (Steele, Lea, Flood). Also used to derive child seeds.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

class Rng {
 public:
  static constexpr std::string_view kDefaultAlgorithm = "splitmix64";

  explicit Rng(std::uint64_t seed, std::string_view algorithm = kDefaultAlgorithm)
      : algorithm_(algorithm), engine_(make_engine(algorithm, seed)) {}

  [[nodiscard]] const std::string& algorithm() const { return algorithm_; }

  std::uint64_t next_u64() {
    return std::visit([](auto& e) -> std::uint64_t { return e(); }, engine_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw DomainError("Rng::below: empty range");
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
  }

  /// Standard normal variate (Box-Muller; the sine branch is cached).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  /// Independent child generator of the same algorithm.
  Rng split() {
    SplitMix64 mixer(next_u64());
    return Rng(mixer(), algorithm_);
  }

 private:
  using Engine = std::variant<SplitMix64, std::mt19937_64>;

  static Engine make_engine(std::string_view algorithm, std::uint64_t seed) {
    if (algorithm == "splitmix64") return SplitMix64(seed);
    if (algorithm == "mt19937_64") return std::mt19937_64(seed);
    throw DomainError("unknown random algorithm '" + std::string(algorithm) +
                      "' (expected splitmix64 or mt19937_64)");
  }

  std::string algorithm_;
  Engine engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qcensor
