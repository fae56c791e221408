#pragma once

#include <cstdint>

namespace sbcode {

// All randomness in the library flows through one primitive: the SplitMix64
// output function applied to a linearly advancing state.
//
// Two access patterns are supported:
//   - stream_at(seed, i): random access to entry i of the stream identified
//     by `seed`. Matrix entries use this, so entry (i,j) depends only on
//     (seed, i, j) and generation order or parallelism cannot change it.
//   - SplitMix64: a sequential generator for shuffles and k-means restarts.
//
// Independent child streams (matrix entries, straggler draws, decoder picks,
// per-trial seeds) are derived with seed_chain(seed, label). This is the
// fixed mixing function referred to in the README.

inline constexpr std::uint64_t kSeedGamma = 0x9e3779b97f4a7c15ULL;

[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

[[nodiscard]] constexpr std::uint64_t stream_at(std::uint64_t seed,
                                                std::uint64_t index) noexcept {
  return mix64(seed + (index + 1) * kSeedGamma);
}

[[nodiscard]] constexpr std::uint64_t seed_chain(std::uint64_t seed,
                                                 std::uint64_t label) noexcept {
  return mix64((seed + kSeedGamma) ^ mix64(label + kSeedGamma));
}

// Maps 64 random bits to a double in [0, 1).
[[nodiscard]] constexpr double unit_double(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Labels for derived streams. Values are arbitrary but frozen: changing them
// changes every seeded artifact.
inline constexpr std::uint64_t kStreamMatrix = 0x01;
inline constexpr std::uint64_t kStreamStragglers = 0x02;
inline constexpr std::uint64_t kStreamDecode = 0x03;
inline constexpr std::uint64_t kStreamPermutation = 0x04;
inline constexpr std::uint64_t kStreamGdData = 0x05;

class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next_u64() noexcept {
    state_ += kSeedGamma;
    return mix64(state_);
  }

  constexpr double next_unit() noexcept { return unit_double(next_u64()); }

  // Unbiased integer in [0, n); n >= 1.
  constexpr std::uint64_t next_below(std::uint64_t n) noexcept {
    std::uint64_t x = next_u64();
    std::uint64_t r = x % n;
    while (x - r > std::uint64_t(0) - n) {
      x = next_u64();
      r = x % n;
    }
    return r;
  }

 private:
  std::uint64_t state_;
};

}  // namespace sbcode
