#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace mpsketch {

// GCC and Clang extension; __extension__ keeps -Wpedantic quiet.
__extension__ typedef unsigned __int128 uint128;

// Stream generator used for every random draw in the library. SplitMix64 is
// chosen for O(1) seeding: protocols open one stream per (vertex, sketch row)
// and the count of streams per trial runs into the hundreds of thousands.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Uniform in (0, 1); safe to take the logarithm of.
  double uniform_open() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard exponential variate.
  double exponential() noexcept { return -std::log(uniform_open()); }

  /// Uniform integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept {
    // Lemire's multiply-and-reject.
    uint128 product =
        static_cast<uint128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        product = static_cast<uint128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

  bool bernoulli(double prob) noexcept { return uniform() < prob; }

 private:
  std::uint64_t state_;
};

/// Finalizer used to mix seeds; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of the stream addressed by `keys` under `master`. Distinct key paths
/// give unrelated streams; protocols key by (purpose, vertex, row).
constexpr std::uint64_t derive_seed(
    std::uint64_t master, std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h = mix64(master ^ 0x6a09e667f3bcc909ULL);
  for (std::uint64_t k : keys) {
    h = mix64(h ^ (k + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
  }
  return h;
}

// Purpose tags for derive_seed so unrelated streams never share a key path.
namespace stream_tag {
inline constexpr std::uint64_t kSketch = 0x51;
inline constexpr std::uint64_t kAuxSketch = 0x52;
inline constexpr std::uint64_t kRounding = 0x61;
inline constexpr std::uint64_t kMorris = 0x71;
inline constexpr std::uint64_t kHash = 0x81;
inline constexpr std::uint64_t kData = 0x91;
inline constexpr std::uint64_t kTrial = 0xa1;
inline constexpr std::uint64_t kTopology = 0xb1;
}  // namespace stream_tag

}  // namespace mpsketch
