#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace mpsketch::harness {

struct CommPoint {
  std::size_t depth = 0;
  std::size_t m = 0;  // line of 2 depth + 1 vertices, rooted at its center
  std::size_t k = 0;
  std::size_t trials = 0;
  double mean_max_edge_bits = 0.0;
  /// mean_max_edge_bits / k.
  double bits_per_row = 0.0;
  /// The same protocol with 64-bit scalars on every edge.
  double baseline_bits_per_row = 0.0;
};

struct CommScalingSpec {
  double p = 1.5;
  double eps = 0.25;
  std::vector<std::size_t> depths{4, 16, 64, 256};
  std::size_t n = 1000;
  std::string dist = "zipf:1.1";
  std::size_t items = 10000;
  std::size_t trials = 3;
  std::uint64_t seed = 1;
};

/// F_p (p in (1, 2]) on line graphs of the given depths; per-edge cost of
/// the rounded codec against the exact baseline.
std::vector<CommPoint> comm_scaling(const CommScalingSpec& spec,
                                    std::size_t threads = 0);

struct LogFit {
  double a = 0.0;
  double b = 0.0;
  /// max_i |y_i - (a + b ln x_i)| / y_i.
  double max_relative_residual = 0.0;
};

/// Least squares fit of y = a + b ln x.
LogFit fit_log_linear(const std::vector<double>& x, const std::vector<double>& y);

std::string comm_csv(const std::vector<CommPoint>& points);
std::string comm_json(const std::vector<CommPoint>& points, const LogFit& fit);

}  // namespace mpsketch::harness
