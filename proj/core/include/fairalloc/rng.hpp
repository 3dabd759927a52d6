#pragma once

#include <cstdint>
#include <random>

namespace fairalloc {

// SplitMix64 step. Used only to expand/mix seeds, never as the draw engine.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Deterministic random stream: std::mt19937_64 (whose output sequence is
/// pinned by the standard) seeded through SplitMix64. Uniform doubles are
/// built from the top 53 bits so draws are bit-identical across platforms,
/// unlike std::uniform_real_distribution.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // [0, 1)
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, n); n >= 1. Modulo bias is irrelevant at the
  // ranges used here (n <= a few thousand).
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

 private:
  std::mt19937_64 engine_;
};

/// Substream `index` of a base seed. Streams for distinct indices are
/// independent for practical purposes and depend only on (seed, index).
inline RngStream substream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed ^ (0xD1B54A32D192ED03ull * (index + 1));
  std::uint64_t a = splitmix64(state);
  std::uint64_t b = splitmix64(state);
  return RngStream(a ^ (b << 1));
}

/// A fresh 64-bit seed derived from (base, a, b); used to give each
/// experiment trial its own scenario seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                 std::uint64_t b) {
  std::uint64_t state = base;
  splitmix64(state);
  state ^= 0x9E3779B97F4A7C15ull * (a + 1);
  splitmix64(state);
  state ^= 0xC2B2AE3D27D4EB4Full * (b + 1);
  return splitmix64(state);
}

}  // namespace fairalloc
