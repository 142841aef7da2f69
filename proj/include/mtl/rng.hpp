#pragma once

#include <cstdint>

namespace mtl {

/// Counter-free splitmix64 stream. Used instead of <random> so that every
/// platform and standard library produces identical draws for a given seed;
/// Monte Carlo results and CSV/JSON outputs must be byte-reproducible.
class rng_stream {
public:
  explicit rng_stream(std::uint64_t state) : state_(state) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1), 53-bit resolution.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [-1, 1).
  double next_symmetric() { return 2.0 * next_unit() - 1.0; }

private:
  std::uint64_t state_;
};

inline std::uint64_t mix_u64(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

/// Stream keyed by (seed, trial, lane[, index]). Streams for different keys
/// are decorrelated, so trials may be evaluated in any order or in parallel.
inline rng_stream derive_stream(std::uint64_t seed, std::uint64_t trial, std::uint64_t lane,
                                std::uint64_t index = 0) {
  std::uint64_t k = mix_u64(seed + 0x9e3779b97f4a7c15ULL);
  k = mix_u64(k ^ (trial + 0xbf58476d1ce4e5b9ULL));
  k = mix_u64(k ^ (lane + 0x94d049bb133111ebULL));
  k = mix_u64(k ^ (index + 0x2545f4914f6cdd1dULL));
  return rng_stream(k);
}

} // namespace mtl
