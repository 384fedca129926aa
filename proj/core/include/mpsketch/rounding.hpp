#pragma once

#include <cstddef>
#include <cstdint>

#include "mpsketch/bitstream.hpp"
#include "mpsketch/rng.hpp"

namespace mpsketch {

/// Grid +-(1+gamma)^i, i in [exponent_min, exponent_max].
struct RoundingParams {
  double gamma = 1.0;
  std::int64_t exponent_min = -1024;
  std::int64_t exponent_max = 1024;

  /// Throws ParameterError unless 0 < gamma <= 1 and min < max.
  void validate() const;

  /// ln(1 + gamma), the exponent-to-log conversion factor.
  double log_base() const noexcept;
};

struct RoundedMessage {
  bool is_zero = true;
  int sign = 1;
  std::int64_t exponent = 0;

  friend bool operator==(const RoundedMessage&,
                         const RoundedMessage&) = default;
};

/// (1+gamma)^exponent computed the same way everywhere, so encoder and
/// decoder agree on grid points bit-for-bit.
double grid_value(std::int64_t exponent, double log_base) noexcept;

/// Unbiased stochastic rounding of r onto the grid. Throws WindowError when
/// the chosen exponent would leave the configured window.
RoundedMessage round_stochastic(double r, const RoundingParams& params,
                                Rng& rng);

/// Lower grid exponent i with (1+gamma)^i <= |r| < (1+gamma)^(i+1), and the
/// probability of rounding up. r must be non-zero and finite.
struct RoundingSplit {
  std::int64_t lower;
  double lower_value;
  double upper_value;
  double up_probability;
};
RoundingSplit rounding_split(double r, double log_base) noexcept;

double decode(const RoundedMessage& msg, const RoundingParams& params) noexcept;

/// Zero flag; if non-zero, sign bit (1 = negative) then
/// Elias-gamma(zigzag(exponent) + 1).
void encode_bits(const RoundedMessage& msg, BitWriter& out);
RoundedMessage decode_bits(BitReader& in);
std::size_t encoded_length(const RoundedMessage& msg) noexcept;

/// gamma = (eps * delta / (d * log2(n * m)))^c_exponent. d and log2(n * m)
/// are floored at 1 so 0 < gamma <= 1. The window spans the truncation floor
/// (mK)^-(d+3) up to K^6 with K = (M n m)^2 / gamma.
RoundingParams gamma_for(double eps, double delta, std::size_t d, double n,
                         double m, double c_exponent = 1.0,
                         double max_entry = 1.0);

/// ln K for K = (M n m)^2 / gamma.
double log_truncation_k(double gamma, double n, double m, double max_entry);

/// ln of the truncation floor (mK)^-(d+3-layer).
double log_truncation_floor(std::size_t layer, std::size_t depth, double m,
                            double log_k) noexcept;

/// 0 when |r| is below the floor of `layer`, r otherwise.
double truncate_message(double r, std::size_t layer, std::size_t depth,
                        double m, double log_k) noexcept;

}  // namespace mpsketch
