#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace featshift {

/// Mixes (seed, label, index) into an independent 64-bit stream seed.
/// label is hashed with FNV-1a, then the three words are folded through
/// SplitMix64 finalizers. Stable across platforms and releases.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label, std::uint64_t index = 0);

/// Seeded generator. The engine is std::mt19937_64; the variate helpers are
/// implemented here instead of with <random> distributions so draws are
/// bit-identical across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0, 1).
  double uniform_open() {
    double u;
    do {
      u = uniform();
    } while (u == 0.0);
    return u;
  }

  /// Uniform integer in [0, n). Lemire's multiply-shift with rejection.
  std::size_t index(std::size_t n);

  /// Uniform integer in [lo, hi] inclusive.
  std::size_t integer(std::size_t lo, std::size_t hi) { return lo + index(hi - lo + 1); }

  /// Standard normal via the Marsaglia polar method.
  double normal();

  void fill_normal(double* out, std::size_t n);

  /// Child generator for a named sub-stream; does not advance this generator.
  Rng split(std::string_view label, std::uint64_t index = 0) const {
    return Rng(derive_seed(seed_, label, index));
  }

  /// Uniformly random permutation of 0..n-1 (Fisher-Yates).
  std::vector<std::size_t> permutation(std::size_t n);

private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace featshift
