#pragma once

#include <cmath>
#include <cstdint>

namespace tvgsr {

/// SplitMix64 generator (Steele, Lea & Flood 2014). Chosen over std::mt19937
/// because the full algorithm fits in a dozen lines and produces identical
/// streams on every platform, which the reproducibility contract requires.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, bound) by rejection from the top of the 64-bit
  /// range. bound must be >= 1.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (0xFFFFFFFFFFFFFFFFULL / bound);
    std::uint64_t v = next();
    while (v >= limit) v = next();
    return v % bound;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller. Used only for synthetic data.
  double next_gaussian() {
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

 private:
  std::uint64_t state_;
};

namespace detail {
inline std::uint64_t splitmix_mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}
}  // namespace detail

/// Derives an independent sub-seed from a master seed, a stream id and an
/// index within the stream. The rule is fixed so that trial t of any
/// experiment is reproducible in isolation:
///   mix(mix(master) ^ C*(stream+1) ^ mix(C*(index+1)))
/// with mix the SplitMix64 output function and C the 64-bit golden ratio.
inline std::uint64_t sub_seed(std::uint64_t master, std::uint64_t stream,
                              std::uint64_t index) {
  constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  const std::uint64_t a = detail::splitmix_mix(master);
  const std::uint64_t b = detail::splitmix_mix(kGolden * (index + 1));
  return detail::splitmix_mix(a ^ (kGolden * (stream + 1)) ^ b);
}

/// Stream ids used by the experiment drivers. Grid-search masks never share a
/// stream with final-run masks, so parameter selection cannot see the
/// evaluation masks.
namespace seed_stream {
inline constexpr std::uint64_t kGridSearch = 0x100;
inline constexpr std::uint64_t kFinalRuns = 0x200;
inline constexpr std::uint64_t kIterations = 0x300;
inline constexpr std::uint64_t kSynthetic = 0x400;
}  // namespace seed_stream

}  // namespace tvgsr
