#include "mpsketch/bitstream.hpp"

#include <bit>

#include "mpsketch/errors.hpp"

namespace mpsketch {

bool BitReader::get_bit() {
  if (pos_ >= bits_.size()) throw ParameterError("bit stream exhausted");
  return bits_[pos_++];
}

std::uint64_t BitReader::get_bits(unsigned width) {
  std::uint64_t v = 0;
  for (unsigned i = 0; i < width; ++i) v = (v << 1) | (get_bit() ? 1U : 0U);
  return v;
}

void elias_gamma_encode(std::uint64_t x, BitWriter& out) {
  if (x == 0) throw ParameterError("Elias-gamma is undefined for 0");
  const unsigned width = static_cast<unsigned>(std::bit_width(x));
  for (unsigned i = 1; i < width; ++i) out.put_bit(false);
  out.put_bits(x, width);
}

std::uint64_t elias_gamma_decode(BitReader& in) {
  unsigned zeros = 0;
  while (!in.get_bit()) {
    if (++zeros > 63) throw ParameterError("malformed Elias-gamma code");
  }
  std::uint64_t v = 1;
  for (unsigned i = 0; i < zeros; ++i) v = (v << 1) | (in.get_bit() ? 1U : 0U);
  return v;
}

}  // namespace mpsketch
