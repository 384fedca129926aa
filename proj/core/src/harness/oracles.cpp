#include "mpsketch/harness/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace mpsketch::oracle {

double frequency_moment(const std::vector<std::uint64_t>& x, double p) {
  double acc = 0.0;
  for (std::uint64_t v : x) {
    if (v != 0) acc += std::pow(static_cast<double>(v), p);
  }
  return acc;
}

double lp_norm(const std::vector<std::uint64_t>& x, double p) {
  return std::pow(frequency_moment(x, p), 1.0 / p);
}

double entropy(const std::vector<std::uint64_t>& x) {
  long double total = 0.0L;
  for (std::uint64_t v : x) total += static_cast<long double>(v);
  if (total == 0.0L) throw std::domain_error("entropy of the zero vector");
  long double h = 0.0L;
  for (std::uint64_t v : x) {
    if (v == 0) continue;
    const long double q = static_cast<long double>(v) / total;
    h -= q * std::log(q);
  }
  return static_cast<double>(h);
}

double tail_norm(const std::vector<std::uint64_t>& x, std::size_t s) {
  std::vector<std::uint64_t> sorted = x;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  long double acc = 0.0L;
  for (std::size_t i = s; i < sorted.size(); ++i) {
    const long double v = static_cast<long double>(sorted[i]);
    acc += v * v;
  }
  return static_cast<double>(std::sqrt(acc));
}

std::vector<double> transpose_product(const std::vector<std::uint64_t>& x,
                                      const std::vector<std::uint64_t>& y,
                                      std::size_t n, std::size_t t1,
                                      std::size_t t2) {
  if (x.size() != n * t1 || y.size() != n * t2) {
    throw std::invalid_argument("transpose_product shape mismatch");
  }
  std::vector<long double> acc(t1 * t2, 0.0L);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t a = 0; a < t1; ++a) {
      const long double xa = static_cast<long double>(x[r * t1 + a]);
      if (xa == 0.0L) continue;
      for (std::size_t b = 0; b < t2; ++b) {
        acc[a * t2 + b] += xa * static_cast<long double>(y[r * t2 + b]);
      }
    }
  }
  return {acc.begin(), acc.end()};
}

double frobenius(const std::vector<std::uint64_t>& a) {
  long double acc = 0.0L;
  for (std::uint64_t v : a) {
    const long double d = static_cast<long double>(v);
    acc += d * d;
  }
  return static_cast<double>(std::sqrt(acc));
}

double frobenius(const std::vector<double>& a) {
  long double acc = 0.0L;
  for (double v : a) acc += static_cast<long double>(v) * v;
  return static_cast<double>(std::sqrt(acc));
}

double frobenius_distance(const std::vector<double>& a,
                          const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("frobenius_distance shape mismatch");
  }
  long double acc = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const long double d = static_cast<long double>(a[i]) - b[i];
    acc += d * d;
  }
  return static_cast<double>(std::sqrt(acc));
}

}  // namespace mpsketch::oracle
