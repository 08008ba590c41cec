#pragma once

#include <cstdint>
#include <random>

namespace grafield {

// Reproducibility helpers. All randomized routines in this library draw
// their numbers through these functions so that a (seed, draw order) pair
// pins the output bit-for-bit across platforms and standard libraries.
//
// The base generator is std::mt19937_64 seeded with a single 64-bit value;
// its output sequence is fully specified by the standard. Floating-point
// draws are derived from the raw 64-bit words by hand because the standard
// distributions are not portable.

// splitmix64 finalizer, used to decorrelate derived stream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Stream-splitting rule: substream `index` of `seed` is seeded with
// mix64(mix64(seed) + index). Monte Carlo replicate r always uses
// derive_stream(seed, r), so results never depend on evaluation order.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
  return mix64(mix64(seed) + index);
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
  return std::mt19937_64(seed);
}

// Uniform draw on (0, 1]: top 53 bits of one output word, shifted into the
// half-open unit interval from above. Never returns 0, may return 1.
inline double unit_open_closed(std::mt19937_64& eng) {
  return static_cast<double>((eng() >> 11) + 1) * 0x1.0p-53;
}

// Bernoulli(p) with p in [0,1]; exact at the endpoints.
inline bool bernoulli(std::mt19937_64& eng, double p) {
  return unit_open_closed(eng) <= p;
}

}  // namespace grafield
