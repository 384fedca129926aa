#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace mpsketch {

/// Element of rank floor((n-1)/2): the lower median for even n.
inline double lower_median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty set");
  const auto mid = static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  return values[static_cast<std::size_t>(mid)];
}

/// Lower median of |v_i|.
inline double lower_median_abs(std::span<const double> values) {
  std::vector<double> a(values.size());
  std::transform(values.begin(), values.end(), a.begin(),
                 [](double x) { return std::fabs(x); });
  return lower_median(std::move(a));
}

/// Midpoint of the two central order statistics for even n.
inline double symmetric_median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty set");
  const std::size_t n = values.size();
  const auto hi = static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(values.begin(), values.begin() + hi, values.end());
  const double upper = values[static_cast<std::size_t>(hi)];
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + hi);
  return 0.5 * (lower + upper);
}

}  // namespace mpsketch
