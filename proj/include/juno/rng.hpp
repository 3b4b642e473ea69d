#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace juno {

/// splitmix64 step; used only to spread a master seed into per-stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Named randomness streams. Every run keeps these separate so ablations can
/// vary exactly one of them at a time.
enum class Stream : std::uint64_t {
  environment = 1,  // channel-condition sampling
  walk = 2,         // start zones and random-walk directions
  agent = 3,        // epsilon draws and random actions
  guide = 4,        // random guide-table fill
  noise = 5,        // measurement jitter and NLoS bias
};

inline std::uint64_t derive_seed(std::uint64_t master, Stream stream) {
  std::uint64_t s = master ^ (static_cast<std::uint64_t>(stream) * 0xd1b54a32d192ed03ull);
  const std::uint64_t a = splitmix64(s);
  const std::uint64_t b = splitmix64(s);
  return a ^ (b << 1) ^ (b >> 1);
}

/// Deterministic random source. Sampling is done with explicit
/// transformations of the raw mt19937_64 output rather than the standard
/// distributions, whose mappings differ between library implementations;
/// identical seeds therefore give identical streams everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), n >= 1. Rejection keeps the draw unbiased.
  std::uint64_t uniform_int(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Box-Muller transform; consumes exactly two uniforms per call once the
  /// zero-rejection on u1 passes.
  double normal(double mean, double stddev) {
    double u1;
    do {
      u1 = uniform01();
    } while (u1 == 0.0);
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(kTwoPi * u2);
  }

  /// Inverse-CDF exponential with the given mean; returns 0 when mean is 0.
  double exponential(double mean) {
    const double u = uniform01();
    return -mean * std::log1p(-u);
  }

 private:
  static constexpr double kTwoPi = 6.283185307179586476925286766559;
  std::mt19937_64 engine_;
};

}  // namespace juno
