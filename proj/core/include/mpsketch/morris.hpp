#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>

#include "mpsketch/bitstream.hpp"
#include "mpsketch/rng.hpp"

namespace mpsketch {

/// Base 1 + (eps * delta)^2, the choice that gives |n~ - n| <= eps * n with
/// probability 1 - delta.
double morris_base(double eps, double delta);

/// (b^C - 1) / (b - 1), equal to (b^C - b)/(b - 1) + 1.
double morris_estimate(std::uint64_t value, double base) noexcept;

class MorrisCounter {
 public:
  /// Throws ParameterError unless base lies in (1, 2].
  explicit MorrisCounter(double base, std::uint64_t value = 0);

  double base() const noexcept { return base_; }
  std::uint64_t value() const noexcept { return value_; }

  /// C += 1 with probability b^-C.
  void increment(Rng& rng);

  /// Same law as `u` calls of increment. At level C the wait for the next
  /// increment is Geometric(b^-C), so the cost is O(levels gained + 1).
  void add_batch(std::uint64_t u, Rng& rng);

  double estimate() const noexcept { return morris_estimate(value_, base_); }

  friend bool operator==(const MorrisCounter&, const MorrisCounter&) = default;

 private:
  friend class StreamingMorris;

  double base_;
  std::uint64_t value_;
};

/// Output distributed as a counter fed n_x + n_y increments. Simulates the
/// merge loop "for i = 1..Y: Z += 1 w.p. b^(-Z+i-1)" without iterating:
/// the gap g = Z - (i-1) either holds (w.p. b^-g) or drops by one, so runs
/// of drops are drawn by inverting a cached cumulative table and runs of
/// holds are geometric. Throws ParameterError on base mismatch.
MorrisCounter merge(const MorrisCounter& x, const MorrisCounter& y, Rng& rng);

/// Insertions and deletions tracked by two counters with a common base.
class SignedMorrisCounter {
 public:
  explicit SignedMorrisCounter(double base) : ins_(base), del_(base) {}
  SignedMorrisCounter(MorrisCounter ins, MorrisCounter del);

  double base() const noexcept { return ins_.base(); }
  const MorrisCounter& ins() const noexcept { return ins_; }
  const MorrisCounter& del() const noexcept { return del_; }

  /// Positive v feeds ins, negative v feeds del.
  void add(std::int64_t v, Rng& rng);
  void add_magnitude(bool negative, std::uint64_t magnitude, Rng& rng);

  double estimate() const noexcept { return ins_.estimate() - del_.estimate(); }

  friend bool operator==(const SignedMorrisCounter&,
                         const SignedMorrisCounter&) = default;

 private:
  MorrisCounter ins_;
  MorrisCounter del_;
};

SignedMorrisCounter merge(const SignedMorrisCounter& x,
                          const SignedMorrisCounter& y, Rng& rng);

/// Counter fed by a stream of batches. Keeps the number of further updates
/// until the next increment, so each batch costs O(1) plus O(levels gained);
/// the geometric waits are memoryless, so the law matches add_batch.
class StreamingMorris {
 public:
  explicit StreamingMorris(double base) : counter_(base) {}

  void add(std::uint64_t u, Rng& rng) {
    if (u < pending_) {
      pending_ -= u;
      return;
    }
    advance(u, rng);
  }
  const MorrisCounter& counter() const noexcept { return counter_; }
  double estimate() const noexcept { return counter_.estimate(); }

 private:
  void advance(std::uint64_t u, Rng& rng);
  std::uint64_t next_wait(Rng& rng);

  MorrisCounter counter_;
  std::uint64_t pending_ = 0;  // 0: wait not yet drawn
  // Cached per-level rates -log(1 - b^-j), shared across counters of a base.
  std::shared_ptr<const void> table_;
  const double* rates_ = nullptr;
  std::size_t rate_count_ = 0;
};

/// Updates consumed up to and including the next increment at level C,
/// saturated at UINT64_MAX.
std::uint64_t morris_wait(std::uint64_t level, double log_base, Rng& rng);

// Wire format: 8-bit base index, then Elias-gamma(C + 1) per counter.
inline constexpr unsigned kMorrisBaseIndexBits = 8;

constexpr std::size_t morris_counter_bits(std::uint64_t value) noexcept {
  return kMorrisBaseIndexBits + elias_gamma_length(value + 1);
}
constexpr std::size_t signed_counter_bits(std::uint64_t ins,
                                          std::uint64_t del) noexcept {
  return kMorrisBaseIndexBits + elias_gamma_length(ins + 1) +
         elias_gamma_length(del + 1);
}

void encode_counter(const MorrisCounter& c, std::uint8_t base_index,
                    BitWriter& out);
/// Base looked up as bases[index]; throws ParameterError on a bad index.
MorrisCounter decode_counter(BitReader& in, std::span<const double> bases);
void encode_signed_counter(const SignedMorrisCounter& c,
                           std::uint8_t base_index, BitWriter& out);
SignedMorrisCounter decode_signed_counter(BitReader& in,
                                          std::span<const double> bases);

}  // namespace mpsketch
