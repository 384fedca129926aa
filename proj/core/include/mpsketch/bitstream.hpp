#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace mpsketch {

/// Append-only bit string, most significant bit of each field first.
class BitWriter {
 public:
  void put_bit(bool bit) { bits_.push_back(bit); }

  /// Writes the low `width` bits of `value`, high bit first.
  void put_bits(std::uint64_t value, unsigned width) {
    for (unsigned i = width; i-- > 0;) put_bit(((value >> i) & 1U) != 0);
  }

  std::size_t size() const noexcept { return bits_.size(); }
  const std::vector<bool>& bits() const noexcept { return bits_; }

  /// "0101..." rendering, handy in tests and WIRE.md examples.
  std::string to_string() const {
    std::string out;
    out.reserve(bits_.size());
    for (bool b : bits_) out.push_back(b ? '1' : '0');
    return out;
  }

 private:
  std::vector<bool> bits_;
};

class BitReader {
 public:
  explicit BitReader(const std::vector<bool>& bits) : bits_(bits) {}

  bool get_bit();
  std::uint64_t get_bits(unsigned width);

  std::size_t position() const noexcept { return pos_; }
  bool exhausted() const noexcept { return pos_ >= bits_.size(); }

 private:
  const std::vector<bool>& bits_;
  std::size_t pos_ = 0;
};

constexpr std::uint64_t zigzag_encode(std::int64_t v) noexcept {
  return (static_cast<std::uint64_t>(v) << 1) ^
         static_cast<std::uint64_t>(v >> 63);
}

constexpr std::int64_t zigzag_decode(std::uint64_t u) noexcept {
  return static_cast<std::int64_t>(u >> 1) ^ -static_cast<std::int64_t>(u & 1);
}

/// Length of the Elias-gamma code of x >= 1: 2*floor(log2 x) + 1.
constexpr std::size_t elias_gamma_length(std::uint64_t x) noexcept {
  return 2 * static_cast<std::size_t>(std::bit_width(x) - 1) + 1;
}

/// Elias-gamma code of x >= 1: floor(log2 x) zeros, then x in binary.
void elias_gamma_encode(std::uint64_t x, BitWriter& out);
std::uint64_t elias_gamma_decode(BitReader& in);

}  // namespace mpsketch
