#pragma once
// Seedable PRNG for all sampling in this project: SplitMix64
// (Steele, Lea & Flood 2014; public-domain reference code by Vigna).
//
// Why not <random>: engines are portable but the std:: distributions are
// implementation-defined, so uniform_real_distribution can emit different
// streams on different standard libraries.  Experiments here must be
// byte-reproducible from a recorded seed, so uniforms are produced
// directly from the raw 64-bit stream and nothing from <random> is used.
//
// Algorithm (64-bit, wrapping arithmetic):
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   output = z ^ (z >> 31)
// u01 = (output >> 11) * 2^-53, uniform on [0, 1).

#include <cstdint>
#include <vector>

namespace fairddp {

// Output permutation of SplitMix64 applied to a single word.  This is a
// bijection on uint64_t, which makes seed derivation provably injective.
constexpr std::uint64_t splitmix_scramble(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Stream seed for a sub-experiment.  For a fixed base this is injective in
// stream (scramble is a bijection, xor with a constant is a bijection,
// composing bijections preserves distinctness).
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
  return splitmix_scramble(base ^ splitmix_scramble(stream));
}

class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next_u64() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1), 53 random mantissa bits.
  constexpr double next_u01() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on {0, ..., n-1} by rejection; unbiased, portable.
  constexpr std::uint64_t next_below(std::uint64_t n) noexcept {
    const std::uint64_t limit = ~0ULL - (~0ULL % n);
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % n;
  }

 private:
  std::uint64_t state_;
};

// Fisher-Yates; permutation depends only on the seed and n.
template <typename T>
void seeded_shuffle(std::vector<T>& v, std::uint64_t seed) {
  SplitMix64 g(seed);
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(g.next_below(i));
    using std::swap;
    swap(v[i - 1], v[j]);
  }
}

inline constexpr const char* kRngName = "splitmix64";

}  // namespace fairddp
