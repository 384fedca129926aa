#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mpsketch/data.hpp"
#include "mpsketch/protocol_engine.hpp"
#include "mpsketch/rounded_aggregate.hpp"
#include "mpsketch/topology.hpp"

namespace mpsketch {

/// Arithmetic modulo the Mersenne prime 2^61 - 1.
inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;
std::uint64_t mulmod61(std::uint64_t a, std::uint64_t b) noexcept;

/// Count-sketch layout and hash functions. Row j uses the pairwise
/// independent bucket hash h_j(x) = ((a x + b) mod P) mod w and the 4-wise
/// independent sign g_j(x) = +-1 from the low bit of a cubic mod P.
class CountSketchSpec {
 public:
  /// rows = ceil(c_rows * log2 n) (at least 1), width = ceil(6 / eps^2).
  CountSketchSpec(std::size_t n, double eps, std::uint64_t seed,
                  double c_rows = 2.0);

  std::size_t dim() const noexcept { return n_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t cells() const noexcept { return rows_ * width_; }
  std::uint64_t seed() const noexcept { return seed_; }

  std::size_t bucket(std::size_t row, std::uint64_t x) const noexcept;
  int sign(std::size_t row, std::uint64_t x) const noexcept;

 private:
  struct RowHash {
    std::uint64_t a, b;        // bucket hash
    std::uint64_t c[4];        // sign polynomial, c[3] x^3 + ... + c[0]
  };
  std::size_t n_;
  std::size_t rows_;
  std::size_t width_;
  std::uint64_t seed_;
  std::vector<RowHash> hashes_;
};

/// Table A[j * width + c] = sum_x g_j(x) X_x [h_j(x) = c] for a single vector.
std::vector<double> count_sketch_table(const CountSketchSpec& spec,
                                       const SparseVector& x);

/// x~_x = median_j g_j(x) A[j, h_j(x)] (midpoint median for even rows).
std::vector<double> count_sketch_estimates(const CountSketchSpec& spec,
                                           const std::vector<double>& table);

struct HeavyHitterConfig {
  double eps = 0.25;
  double delta = 0.25;
  double c_rows = 2.0;
  double c_exponent = 1.0;
  Codec codec = Codec::kRounded;
};

struct PointEstimates {
  std::vector<double> estimates;
  CommStats stats;
  std::size_t cells = 0;
  std::size_t max_message_bits = 0;
  RoundingParams rounding;
};

/// Every table cell is aggregated by the rounding convergecast (one bundle
/// of rows * width messages per player); hashes come from
/// derive_seed(seed, {kHash}), rounding from derive_seed(seed, {kRounding}).
PointEstimates point_estimate_all(const VectorInputs& inputs,
                                  const SpanningTree& tree,
                                  const HeavyHitterConfig& cfg,
                                  std::uint64_t seed);
PointEstimates point_estimate_all(const VectorInputs& inputs,
                                  const Topology& g,
                                  const HeavyHitterConfig& cfg,
                                  std::uint64_t seed);

/// Sketch spec used by point_estimate_all for (n, cfg, seed).
CountSketchSpec hh_sketch_spec(std::size_t n, const HeavyHitterConfig& cfg,
                               std::uint64_t seed);

/// Indices with estimate >= (eps/2) sqrt(f2_estimate), largest first, at
/// most ceil(4 / eps^2) of them.
std::vector<std::size_t> heavy_hitters(const std::vector<double>& estimates,
                                       double eps, double f2_estimate);

}  // namespace mpsketch
