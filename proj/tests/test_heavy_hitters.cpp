#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "mpsketch/errors.hpp"
#include "mpsketch/heavy_hitters.hpp"
#include "mpsketch/harness/oracles.hpp"
#include "support/fixtures.hpp"

namespace {

using namespace mpsketch;

HeavyHitterConfig config(double eps, Codec codec = Codec::kRounded) {
  HeavyHitterConfig c;
  c.eps = eps;
  c.codec = codec;
  return c;
}

double linf_error(const std::vector<double>& est,
                  const std::vector<std::uint64_t>& x) {
  double e = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    e = std::max(e, std::fabs(est[i] - static_cast<double>(x[i])));
  }
  return e;
}

TEST(CountSketch, Shape) {
  const CountSketchSpec s(1024, 0.25, 1);
  EXPECT_EQ(s.width(), 96u);  // ceil(6 / 0.0625)
  EXPECT_EQ(s.rows(), 20u);   // ceil(2 log2 1024)
  EXPECT_EQ(s.cells(), 96u * 20u);
  EXPECT_EQ(CountSketchSpec(1, 0.5, 1).rows(), 1u);
  EXPECT_THROW(CountSketchSpec(0, 0.5, 1), ParameterError);
  EXPECT_THROW(CountSketchSpec(10, 1.0, 1), ParameterError);
  EXPECT_THROW(CountSketchSpec(10, 0.5, 1, 0.0), ParameterError);
}

TEST(CountSketch, MulmodMatchesWideArithmetic) {
  const std::uint64_t vals[] = {0, 1, 2, kMersenne61 - 1, 123456789012345ULL,
                                (std::uint64_t{1} << 60) + 7};
  for (auto a : vals) {
    for (auto b : vals) {
      const unsigned __int128 w = static_cast<unsigned __int128>(a) * b;
      EXPECT_EQ(mulmod61(a, b), static_cast<std::uint64_t>(w % kMersenne61));
    }
  }
}

TEST(CountSketch, HashesAreBalanced) {
  const CountSketchSpec s(20000, 0.5, 9, 1.0);
  for (std::size_t j = 0; j < s.rows(); ++j) {
    int sum = 0;
    std::vector<std::size_t> load(s.width(), 0);
    for (std::uint64_t x = 0; x < 20000; ++x) {
      sum += s.sign(j, x);
      ++load[s.bucket(j, x)];
    }
    // +-1 signs: |sum| within ~4.5 sigma of 0 (sigma = sqrt(20000)).
    EXPECT_LT(std::abs(sum), 640);
    const double expect = 20000.0 / static_cast<double>(s.width());
    for (auto l : load) EXPECT_NEAR(static_cast<double>(l), expect, 0.15 * expect);
  }
}

TEST(CountSketch, PairCollisionRateIsAboutOneOverWidth) {
  // Pairwise independence: P[h(x) = h(y)] ~ 1/w over random hash draws.
  const std::size_t n = 64;
  int hits = 0, pairs = 0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const CountSketchSpec s(n, 0.5, seed, 0.2);  // width 24, one row
    for (std::uint64_t x = 0; x < 8; ++x) {
      for (std::uint64_t y = x + 1; y < 8; ++y) {
        hits += s.bucket(0, x) == s.bucket(0, y) ? 1 : 0;
        ++pairs;
      }
    }
  }
  const double rate = static_cast<double>(hits) / pairs;
  EXPECT_NEAR(rate, 1.0 / 24.0, 0.012);
}

TEST(HeavyHitters, SingleSpikeIsRecoveredExactly) {
  std::vector<std::uint64_t> x(50, 0);
  x[7] = 100;
  const VectorInputs in = support::single_holder(x, 1);
  const PointEstimates pe = point_estimate_all(in, line(1), config(0.25), 5);
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_EQ(pe.estimates[i], static_cast<double>(x[i])) << i;
  }
  EXPECT_EQ(heavy_hitters(pe.estimates, 0.25, 100.0 * 100.0),
            (std::vector<std::size_t>{7}));
}

TEST(HeavyHitters, ZeroInputsGiveEmptyAnswer) {
  const std::size_t m = 9;
  VectorInputs in(m);
  for (auto& v : in) v.dim = 200;
  const PointEstimates pe = point_estimate_all(in, star(m), config(0.25), 2);
  for (double e : pe.estimates) EXPECT_EQ(e, 0.0);
  EXPECT_TRUE(heavy_hitters(pe.estimates, 0.25, 0.0).empty());
  EXPECT_EQ(pe.stats.max_edge_bits, 1u);
}

TEST(HeavyHitters, ExactCodecMatchesStandaloneCountSketch) {
  const std::size_t m = 13, n = 400;
  const VectorInputs in = support::split_inputs("zipf:1.2", n, m, 3, 6000);
  const HeavyHitterConfig cfg = config(0.3, Codec::kExact);
  const std::uint64_t seed = 44;
  const PointEstimates pe = point_estimate_all(in, balanced_binary(m), cfg, seed);
  const CountSketchSpec spec = hh_sketch_spec(n, cfg, seed);
  const auto agg = SparseVector::from_dense(aggregate(in));
  const auto standalone =
      count_sketch_estimates(spec, count_sketch_table(spec, agg));
  ASSERT_EQ(pe.estimates.size(), standalone.size());
  for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(pe.estimates[i], standalone[i]);
  // One bundle of rows * width raw doubles behind the non-zero flag.
  EXPECT_EQ(pe.stats.max_edge_bits, 1 + 64 * spec.cells());
  EXPECT_EQ(pe.cells, spec.cells());
}

TEST(HeavyHitters, PointErrorWithinTailBound) {
  // |x~_i - x_i| <= eps ||x_tail(1/eps^2)||_2 for every i, w.h.p.
  const std::size_t m = 16, n = 2000;
  const double eps = 0.25;
  int ok = 0;
  const int trials = 20;
  for (int t = 0; t < trials; ++t) {
    const VectorInputs in =
        support::split_inputs("planted:400:4", n, m, 50 + t);
    const auto x = aggregate(in);
    const double tail = oracle::tail_norm(x, 16);
    const PointEstimates pe =
        point_estimate_all(in, star(m), config(eps), static_cast<std::uint64_t>(t));
    ok += linf_error(pe.estimates, x) <= eps * tail ? 1 : 0;
  }
  EXPECT_GE(ok, 19);
}

TEST(HeavyHitters, PlantedHeavyCoordinatesAreFound) {
  const std::size_t m = 10, n = 1000;
  const double eps = 0.3;
  int ok = 0;
  for (int t = 0; t < 20; ++t) {
    const VectorInputs in = support::split_inputs("planted:300:3", n, m, 80 + t);
    const auto x = aggregate(in);
    const PointEstimates pe =
        point_estimate_all(in, line(m), config(eps), static_cast<std::uint64_t>(t));
    const auto hh = heavy_hitters(pe.estimates, eps,
                                  oracle::frequency_moment(x, 2.0));
    std::set<std::size_t> want;
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] == 300) want.insert(i);
    }
    ok += std::set<std::size_t>(hh.begin(), hh.end()) == want ? 1 : 0;
  }
  EXPECT_GE(ok, 18);
}

TEST(HeavyHitters, TwoEqualHeavyCoordinatesAreBothReturned) {
  std::vector<std::uint64_t> x(300, 1);
  x[10] = 500;
  x[200] = 500;
  const VectorInputs in = harness::split_among_players(x, 5, 1);
  const PointEstimates pe = point_estimate_all(in, star(5), config(0.25), 6);
  const auto hh = heavy_hitters(pe.estimates, 0.25, oracle::frequency_moment(x, 2.0));
  ASSERT_EQ(hh.size(), 2u);
  EXPECT_EQ((std::set<std::size_t>(hh.begin(), hh.end())),
            (std::set<std::size_t>{10, 200}));
}

TEST(HeavyHitters, SelectionRule) {
  const std::vector<double> est = {1.0, 9.0, 5.0, 9.0, -20.0, 0.0};
  // threshold = 0.5 * 0.5 * sqrt(400) = 5.
  EXPECT_EQ(heavy_hitters(est, 0.5, 400.0), (std::vector<std::size_t>{1, 3, 2}));
  EXPECT_TRUE(heavy_hitters(std::vector<double>(6, 0.0), 0.5, 0.0).empty());
  // Cap: at most ceil(4 / eps^2) = 16 indices at eps = 0.5.
  const std::vector<double> flat(40, 1.0);
  EXPECT_EQ(heavy_hitters(flat, 0.5, 1.0).size(), 16u);
  EXPECT_THROW(heavy_hitters(est, 0.0, 1.0), ParameterError);
  EXPECT_THROW(heavy_hitters(est, 0.5, -1.0), ParameterError);
}

TEST(HeavyHitters, UniformDataYieldsAValidPossiblyEmptySet) {
  const std::size_t n = 1000;
  const double eps = 0.25;
  const VectorInputs in = support::split_inputs("uniform:3", n, 8, 12);
  const auto x = aggregate(in);
  const double f2 = oracle::frequency_moment(x, 2.0);
  const PointEstimates pe = point_estimate_all(in, star(8), config(eps), 13);
  const auto hh = heavy_hitters(pe.estimates, eps, f2);
  EXPECT_LE(hh.size(), static_cast<std::size_t>(std::ceil(4.0 / (eps * eps))));
  for (std::size_t i = 0; i + 1 < hh.size(); ++i) {
    EXPECT_GE(pe.estimates[hh[i]], pe.estimates[hh[i + 1]]);
  }
  for (auto i : hh) EXPECT_GE(pe.estimates[i], 0.5 * eps * std::sqrt(f2));
}

TEST(HeavyHitters, RoundedMessagesBeatRawDoubles) {
  const std::size_t m = 17;
  const VectorInputs in = support::split_inputs("zipf:1.1", 500, m, 21, 8000);
  const PointEstimates pe = point_estimate_all(in, line(m), config(0.3), 22);
  EXPECT_LE(pe.stats.max_edge_bits, 1 + pe.cells * pe.max_message_bits);
  EXPECT_LT(pe.stats.max_edge_bits, baseline_codec_bits(pe.cells));
}

}  // namespace
