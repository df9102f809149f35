#pragma once

#include <cstdint>
#include <random>

namespace ftlbo {

/// Seeded generator with the handful of draws the optimizers need.
///
/// Streams are keyed by (seed, stream) so the initial population can be
/// shared across algorithms while each algorithm keeps its own sequence.
class Rng {
 public:
  enum Stream : std::uint32_t { kPopulation = 0, kAlgorithm = 1 };

  explicit Rng(std::uint64_t seed, std::uint32_t stream = kAlgorithm) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream,
                      0x9e3779b9u};
    engine_.seed(seq);
  }

  /// Uniform in [0, 1).
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

  /// Uniform integer in [lo, hi].
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

  double normal(double mean, double stddev) { return std::normal_distribution<double>(mean, stddev)(engine_); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ftlbo
