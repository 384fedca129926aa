#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "mpsketch/errors.hpp"
#include "mpsketch/harness/datagen.hpp"
#include "mpsketch/harness/oracles.hpp"
#include "mpsketch/matrix_product.hpp"
#include "support/stat_tests.hpp"

namespace {

using namespace mpsketch;

AmpConfig config(double eps, Codec codec = Codec::kRounded) {
  AmpConfig c;
  c.eps = eps;
  c.codec = codec;
  return c;
}

struct Instance {
  std::vector<std::uint64_t> x, y;
  MatrixInputs xs, ys;
};

Instance instance(std::size_t n, std::size_t t1, std::size_t t2, std::size_t m,
                  std::uint64_t seed) {
  Instance in;
  const auto dist = harness::parse_dist("zipf:1.1");
  in.x = harness::generate_matrix(dist, n, t1, 2000, seed);
  in.y = harness::generate_matrix(dist, n, t2, 2000, seed + 1000);
  in.xs = harness::split_matrix_among_players(in.x, n, t1, m, seed);
  in.ys = harness::split_matrix_among_players(in.y, n, t2, m, seed + 1);
  return in;
}

MatrixInputs single_holder(std::size_t n, std::size_t t,
                           const std::vector<std::uint64_t>& dense) {
  return {SparseMatrix::from_dense(n, t, dense)};
}

TEST(Amp, RowCount) {
  EXPECT_EQ(config(0.25).rows(), 256u);  // 0.125 / (0.125 (1/16)^2)
  EXPECT_DOUBLE_EQ(config(0.25).eps0(), 0.0625);
  AmpConfig c = config(0.25);
  c.k = 10;
  EXPECT_THROW(c.validate(), ParameterError);
  EXPECT_THROW(config(1.0).validate(), ParameterError);
}

TEST(Amp, SketchEntriesHaveVarianceOneOverK) {
  const AmpConfig cfg = config(0.25);
  const SketchMatrix s = amp_sketch(400, cfg, 3);
  std::vector<double> v;
  for (std::size_t i = 0; i < s.rows(); ++i) {
    for (std::size_t j = 0; j < s.cols(); ++j) {
      v.push_back(s.value(i, j) / std::sqrt(2.0 * s.rows()));
    }
  }
  const double k = static_cast<double>(cfg.rows());
  EXPECT_NEAR(support::mean(v), 0.0, 5.0 / std::sqrt(v.size() * k));
  EXPECT_NEAR(support::variance(v) * k, 1.0, 0.02);
}

TEST(Amp, UnitVectorGivesOne) {
  std::vector<std::uint64_t> e(20, 0);
  e[3] = 1;
  const MatrixInputs x = single_holder(20, 1, e);
  int ok = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const AmpResult r = amp_estimate(x, x, line(1), config(0.25), s);
    ASSERT_EQ(r.product.size(), 1u);
    ok += std::fabs(r.product[0] - 1.0) <= 0.25 ? 1 : 0;
  }
  EXPECT_GE(ok, 97);
}

TEST(Amp, ZeroFactorGivesExactZero) {
  const std::size_t n = 50, m = 6;
  Instance in = instance(n, 3, 2, m, 5);
  for (auto& y : in.ys) y.entries.clear();
  for (Codec codec : {Codec::kRounded, Codec::kExact}) {
    const AmpResult r = amp_estimate(in.xs, in.ys, star(m), config(0.25, codec), 9);
    EXPECT_EQ(r.t1, 3u);
    EXPECT_EQ(r.t2, 2u);
    for (double v : r.product) EXPECT_EQ(v, 0.0);
  }
}

TEST(Amp, ExactCodecMatchesStandaloneProduct) {
  const std::size_t n = 500, t = 4, m = 16;
  const Instance in = instance(n, t, t, m, 11);
  const AmpConfig cfg = config(0.25, Codec::kExact);
  const AmpResult r = amp_estimate(in.xs, in.ys, star(m), cfg, 12);
  const auto want = amp_standalone(in.x, in.y, n, t, t, cfg, 12);
  EXPECT_LE(oracle::frobenius_distance(r.product, want),
            1e-10 * oracle::frobenius(want));
}

TEST(Amp, SketchPreservesSquaredNormsOnAverage) {
  // E ||S x||^2 = ||x||^2, the diagonal of (S X)^T (S X).
  const std::size_t n = 100;
  auto x = harness::generate_matrix(harness::parse_dist("zipf:1.1"), n, 1, 500, 2);
  const double truth = std::pow(oracle::frobenius(x), 2);
  std::vector<double> ratio;
  for (std::uint64_t s = 0; s < 200; ++s) {
    ratio.push_back(amp_standalone(x, x, n, 1, 1, config(0.25), s)[0] / truth);
  }
  // Each ratio is chi^2_k / k with k = 256: sd sqrt(2 / k) / sqrt(200).
  EXPECT_NEAR(support::mean(ratio), 1.0, 4.0 * std::sqrt(2.0 / 256) / std::sqrt(200.0));
  EXPECT_NEAR(support::variance(ratio), 2.0 / 256, 0.35 * 2.0 / 256);
}

TEST(Amp, FrobeniusBoundOnAStar) {
  const std::size_t n = 500, t = 4, m = 16;
  const double eps = 0.25;
  int ok = 0;
  const int trials = 30;
  for (int trial = 0; trial < trials; ++trial) {
    const Instance in = instance(n, t, t, m, 100 + trial);
    const auto truth = oracle::transpose_product(in.x, in.y, n, t, t);
    const AmpResult r = amp_estimate(in.xs, in.ys, star(m), config(eps),
                                     static_cast<std::uint64_t>(trial));
    const double bound = eps * oracle::frobenius(in.x) * oracle::frobenius(in.y);
    ok += oracle::frobenius_distance(r.product, truth) <= bound ? 1 : 0;
  }
  EXPECT_GE(ok, 21);
}

TEST(Amp, RoundedBundleIsSmallerThanRawDoubles) {
  const std::size_t n = 200, m = 9;
  const Instance in = instance(n, 2, 3, m, 40);
  const AmpResult r = amp_estimate(in.xs, in.ys, line(m), config(0.25), 41);
  const std::size_t cells = r.k * (r.t1 + r.t2);
  EXPECT_LE(r.stats.max_edge_bits, 1 + cells * r.max_message_bits);
  EXPECT_LT(r.stats.max_edge_bits, baseline_codec_bits(cells));
  const AmpResult again = amp_estimate(in.xs, in.ys, line(m), config(0.25), 41);
  EXPECT_EQ(r.product, again.product);
}

TEST(Amp, ShapeMismatchIsRejected) {
  const Instance in = instance(30, 2, 2, 3, 1);
  MatrixInputs bad = in.ys;
  bad[1].cols = 3;
  EXPECT_THROW(amp_estimate(in.xs, bad, star(3), config(0.25), 1), ParameterError);
  EXPECT_THROW(amp_estimate(in.xs, in.ys, star(4), config(0.25), 1), ParameterError);
  EXPECT_THROW(amp_standalone(in.x, in.y, 30, 2, 3, config(0.25), 1), ParameterError);
}

}  // namespace
