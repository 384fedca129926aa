#include "mpsketch/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mpsketch/errors.hpp"

namespace mpsketch {

void RoundingParams::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw ParameterError("rounding gamma must lie in (0, 1], got " +
                         std::to_string(gamma));
  }
  if (exponent_min >= exponent_max) {
    throw ParameterError("rounding window needs exponent_min < exponent_max");
  }
}

double RoundingParams::log_base() const noexcept { return std::log1p(gamma); }

double grid_value(std::int64_t exponent, double log_base) noexcept {
  return std::exp(static_cast<double>(exponent) * log_base);
}

RoundingSplit rounding_split(double r, double log_base) noexcept {
  const double a = std::fabs(r);
  auto i = static_cast<std::int64_t>(std::floor(std::log(a) / log_base));
  double lo = grid_value(i, log_base);
  while (lo > a) lo = grid_value(--i, log_base);
  double hi = grid_value(i + 1, log_base);
  while (hi <= a) {
    ++i;
    lo = hi;
    hi = grid_value(i + 1, log_base);
  }
  return {i, lo, hi, (a - lo) / (hi - lo)};
}

RoundedMessage round_stochastic(double r, const RoundingParams& params,
                                Rng& rng) {
  if (r == 0.0) return {};
  if (!std::isfinite(r)) throw WindowError("cannot round a non-finite value");
  const RoundingSplit s = rounding_split(r, params.log_base());
  const std::int64_t e = s.lower + (rng.uniform() < s.up_probability ? 1 : 0);
  if (e < params.exponent_min || e > params.exponent_max) {
    throw WindowError("rounded exponent " + std::to_string(e) +
                      " outside window [" +
                      std::to_string(params.exponent_min) + ", " +
                      std::to_string(params.exponent_max) + "]");
  }
  return {false, r < 0.0 ? -1 : 1, e};
}

double decode(const RoundedMessage& msg,
              const RoundingParams& params) noexcept {
  if (msg.is_zero) return 0.0;
  return msg.sign * grid_value(msg.exponent, params.log_base());
}

void encode_bits(const RoundedMessage& msg, BitWriter& out) {
  out.put_bit(msg.is_zero);
  if (msg.is_zero) return;
  out.put_bit(msg.sign < 0);
  elias_gamma_encode(zigzag_encode(msg.exponent) + 1, out);
}

RoundedMessage decode_bits(BitReader& in) {
  RoundedMessage msg;
  msg.is_zero = in.get_bit();
  if (msg.is_zero) return msg;
  msg.sign = in.get_bit() ? -1 : 1;
  msg.exponent = zigzag_decode(elias_gamma_decode(in) - 1);
  return msg;
}

std::size_t encoded_length(const RoundedMessage& msg) noexcept {
  if (msg.is_zero) return 1;
  return 2 + elias_gamma_length(zigzag_encode(msg.exponent) + 1);
}

double log_truncation_k(double gamma, double n, double m, double max_entry) {
  return 2.0 * std::log(std::max(max_entry, 1.0) * n * m) - std::log(gamma);
}

double log_truncation_floor(std::size_t layer, std::size_t depth, double m,
                            double log_k) noexcept {
  const double levels = static_cast<double>(depth) + 3.0 -
                        static_cast<double>(layer);
  return -levels * (std::log(m) + log_k);
}

double truncate_message(double r, std::size_t layer, std::size_t depth,
                        double m, double log_k) noexcept {
  if (r == 0.0) return 0.0;
  return std::log(std::fabs(r)) < log_truncation_floor(layer, depth, m, log_k)
             ? 0.0
             : r;
}

RoundingParams gamma_for(double eps, double delta, std::size_t d, double n,
                         double m, double c_exponent, double max_entry) {
  if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0)) {
    throw ParameterError("gamma_for needs eps, delta in (0, 1)");
  }
  if (!(n >= 1.0) || !(m >= 1.0) || !std::isfinite(n * m)) {
    throw ParameterError("gamma_for needs n, m >= 1");
  }
  if (!(c_exponent >= 0.0) || !std::isfinite(c_exponent)) {
    throw ParameterError("gamma_for needs a finite exponent C >= 0");
  }
  const double depth = std::max<double>(static_cast<double>(d), 1.0);
  const double log_nm = std::max(std::log2(n * m), 1.0);
  RoundingParams params;
  params.gamma = std::pow(eps * delta / (depth * log_nm), c_exponent);
  if (!(params.gamma > 0.0)) {
    throw ParameterError("gamma_for underflowed; lower C");
  }
  const double lb = params.log_base();
  const double log_k = log_truncation_k(params.gamma, n, m, max_entry);
  params.exponent_max = static_cast<std::int64_t>(std::ceil(6.0 * log_k / lb));
  params.exponent_min = static_cast<std::int64_t>(std::floor(
      log_truncation_floor(0, static_cast<std::size_t>(depth), m, log_k) /
      lb));
  return params;
}

}  // namespace mpsketch
