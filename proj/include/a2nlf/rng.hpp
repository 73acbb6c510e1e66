#pragma once

#include <cstdint>
#include <random>

namespace a2nlf {

/// SplitMix64 finalizer. Used to derive independent sub-seeds from one global
/// seed: derive_seed(global, stream) hashes the pair (global, stream).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t global, std::uint64_t stream) noexcept {
  return splitmix64(splitmix64(global) ^ (stream * 0xD1B54A32D192ED03ULL + 1));
}

// Sub-seed streams used by the cross-validation harness.
namespace seed_stream {
inline constexpr std::uint64_t kSplit = 1;
inline constexpr std::uint64_t kInitBase = 100;   // + fold
inline constexpr std::uint64_t kSwarmBase = 200;  // + fold
}  // namespace seed_stream

/// Portable seeded generator. The distributions are written out by hand
/// because the std:: ones are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in (0, 1).
  double uniform_open() {
    double u;
    do u = uniform();
    while (u == 0.0);
    return u;
  }

  /// Uniform integer in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return x % n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace a2nlf
