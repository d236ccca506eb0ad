#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace rcslasso {

/// Stateless 64-bit mixer (splitmix64). Used to derive independent seeds
/// from a single base seed so that stream, matrix and noise generation
/// never share an engine state.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

enum class SeedPurpose : std::uint64_t {
  Stream = 0x73747265616DULL,
  Matrix = 0x6D6174726978ULL,
  Noise = 0x6E6F697365ULL,
};

/// Deterministic per-purpose seed split: same (base, purpose, index)
/// always yields the same derived seed.
inline std::uint64_t derive_seed(std::uint64_t base, SeedPurpose purpose,
                                 std::uint64_t index = 0) {
  return splitmix64(splitmix64(base ^ static_cast<std::uint64_t>(purpose)) +
                    index);
}

/// Pinned-down random source: mt19937_64 engine (bit-exact per the C++
/// standard), 53-bit uniform doubles, Box-Muller normals. Distribution
/// code is written out here instead of using std::*_distribution so the
/// generated sequences are identical on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal deviate via Box-Muller; pairs are consumed in order.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so the log is finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * kPi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Random sign, +1 or -1 with equal probability.
  double sign() { return uniform() < 0.5 ? -1.0 : 1.0; }

  std::uint64_t raw() { return engine_(); }

 private:
  static constexpr double kPi = 3.14159265358979323846;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace rcslasso
