#pragma once

// SplitMix64: a counter-based 64-bit generator. The i-th output of a stream
// seeded with s is mix(s + (i + 1) * golden_gamma), so streams are cheap to
// split and every draw is reproducible from (seed, index) alone.

#include <cstdint>
#include <limits>

namespace threshold_lab {

inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  explicit constexpr SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() {
    state_ += kGamma;
    return splitmix64_mix(state_);
  }

  /// Independent child stream for `index`.
  constexpr SplitMix64 split(std::uint64_t index) const {
    return SplitMix64(derive_seed(state_, index));
  }

  /// Unbiased integer in [0, bound) (Lemire's multiply-and-reject).
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return double((*this)() >> 11) * 0x1.0p-53; }

  /// Per-stream seed for (master, index); used for per-trial streams.
  static constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64_mix(master ^ splitmix64_mix(index + kGamma));
  }

 private:
  std::uint64_t state_;
};

}  // namespace threshold_lab
