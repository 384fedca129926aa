#include "mpsketch/morris.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include <boost/random/exponential_distribution.hpp>

#include "mpsketch/errors.hpp"

namespace mpsketch {
namespace {

constexpr std::uint64_t kU64Max = std::numeric_limits<std::uint64_t>::max();

void check_base(double base) {
  if (!(base > 1.0 && base <= 2.0)) {
    throw ParameterError("Morris base must lie in (1, 2], got " +
                         std::to_string(base));
  }
}

// P[h] = sum_{j=1}^{h-1} log(1 - b^-j) for h >= 1, so the chance that the
// gap falls from g straight through level lo is exp(P[g+1] - P[lo]).
// Terms vanish below double resolution past `cap`, where P is flat.
struct DropTable {
  double log_base = 0.0;
  std::size_t cap = 0;
  std::vector<double> prefix;

  double at(std::uint64_t h) const noexcept {
    return prefix[static_cast<std::size_t>(std::min<std::uint64_t>(h, cap))];
  }
};

std::shared_ptr<const DropTable> drop_table(double base, std::uint64_t need) {
  static std::mutex mu;
  static std::map<double, std::shared_ptr<const DropTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[base];
  const double log_base = std::log(base);
  const auto cap = static_cast<std::size_t>(
      std::ceil(64.0 * std::numbers::ln2 / log_base) + 2.0);
  const std::size_t want = static_cast<std::size_t>(
      std::min<std::uint64_t>(need, cap)) + 1;
  if (slot && slot->prefix.size() > want) return slot;

  auto table = std::make_shared<DropTable>();
  table->log_base = log_base;
  table->cap = cap;
  const std::size_t grown = slot ? 2 * slot->prefix.size() : 64;
  const std::size_t size = std::max(want + 1, std::min(grown, cap + 2));
  table->prefix.resize(size);
  table->prefix[0] = 0.0;
  table->prefix[1] = 0.0;
  for (std::size_t h = 2; h < size; ++h) {
    const double q = std::exp(-static_cast<double>(h - 1) * log_base);
    table->prefix[h] = table->prefix[h - 1] + std::log1p(-q);
  }
  table->cap = std::min(cap, size - 1);
  slot = table;
  return slot;
}

// rates[j] = -log(1 - b^-j): the wait at level j is 1 + floor(E / rates[j])
// for a standard exponential E. Entries match morris_wait bit for bit.
struct RateTable {
  std::vector<double> rates;
};

constexpr std::size_t kMaxRateTable = std::size_t{1} << 24;

std::shared_ptr<const RateTable> rate_table(double base, std::uint64_t need) {
  static std::mutex mu;
  static std::map<double, std::shared_ptr<const RateTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[base];
  const std::size_t want = static_cast<std::size_t>(
      std::min<std::uint64_t>(need, kMaxRateTable)) + 1;
  if (slot && slot->rates.size() >= want) return slot;

  auto table = std::make_shared<RateTable>();
  const double log_base = std::log(base);
  const std::size_t grown = slot ? 2 * slot->rates.size() : 1024;
  const std::size_t size = std::min(std::max(want, grown), kMaxRateTable + 1);
  table->rates.resize(size);
  table->rates[0] = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j < size; ++j) {
    const double q = std::exp(-static_cast<double>(j) * log_base);
    table->rates[j] = -std::log1p(-q);
  }
  slot = table;
  return slot;
}

// Wait at `level` through the cached rates when the table reaches it.
std::uint64_t cached_wait(std::shared_ptr<const RateTable>& table, double base,
                          double log_base, std::uint64_t level, Rng& rng) {
  if (level == 0) return 1;
  if (level >= table->rates.size()) {
    if (level > kMaxRateTable) return morris_wait(level, log_base, rng);
    table = rate_table(base, level);
  }
  // Ziggurat exponential; one log per level was the dominant cost.
  boost::random::exponential_distribution<double> exponential;
  const double failures = std::floor(exponential(rng) / table->rates[level]);
  if (!(failures < 1.8e19)) return kU64Max;
  return 1 + static_cast<std::uint64_t>(failures);
}

}  // namespace

double morris_base(double eps, double delta) {
  if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta <= 1.0)) {
    throw ParameterError("morris_base needs eps in (0,1), delta in (0,1]");
  }
  const double base = 1.0 + (eps * delta) * (eps * delta);
  check_base(base);
  return base;
}

double morris_estimate(std::uint64_t value, double base) noexcept {
  return std::expm1(static_cast<double>(value) * std::log(base)) /
         (base - 1.0);
}

std::uint64_t morris_wait(std::uint64_t level, double log_base, Rng& rng) {
  if (level == 0) return 1;
  const double q = std::exp(-static_cast<double>(level) * log_base);
  const double failures = std::floor(rng.exponential() / -std::log1p(-q));
  if (!(failures < 1.8e19)) return kU64Max;
  return 1 + static_cast<std::uint64_t>(failures);
}

MorrisCounter::MorrisCounter(double base, std::uint64_t value)
    : base_(base), value_(value) {
  check_base(base);
}

void MorrisCounter::increment(Rng& rng) {
  if (value_ == 0 ||
      rng.uniform() < std::exp(-static_cast<double>(value_) * std::log(base_))) {
    ++value_;
  }
}

void MorrisCounter::add_batch(std::uint64_t u, Rng& rng) {
  if (u == 0) return;
  const double log_base = std::log(base_);
  auto table = rate_table(base_, value_ + 1);
  while (u > 0) {
    const std::uint64_t wait = cached_wait(table, base_, log_base, value_, rng);
    if (wait > u) break;
    u -= wait;
    ++value_;
  }
}

MorrisCounter merge(const MorrisCounter& x, const MorrisCounter& y, Rng& rng) {
  if (x.base() != y.base()) {
    throw ParameterError("cannot merge Morris counters with different bases");
  }
  std::uint64_t g = x.value();
  std::uint64_t steps = y.value();
  if (steps == 0 || g == 0) return MorrisCounter(x.base(), g + steps);

  const auto table = drop_table(x.base(), g + 1);
  const double log_base = table->log_base;
  while (steps > 0 && g > 0) {
    // Drops before the next hold: smallest lo in [1, g+1] with
    // P[lo] <= P[g+1] + E, then J = g + 1 - lo (at most g).
    const double threshold = table->at(g + 1) + rng.exponential();
    std::uint64_t lo = 1;
    std::uint64_t hi = g + 1;
    while (lo < hi) {
      const std::uint64_t mid = lo + (hi - lo) / 2;
      if (table->at(mid) <= threshold) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    const std::uint64_t drops = g + 1 - lo;
    if (drops >= steps) {
      g -= steps;
      steps = 0;
      break;
    }
    g -= drops;
    steps -= drops;
    if (g == 0) break;
    // Hold run of length 1 + Geometric, each extra hold w.p. b^-g.
    const double extra = std::floor(rng.exponential() /
                                    (static_cast<double>(g) * log_base));
    if (1.0 + extra >= static_cast<double>(steps)) {
      steps = 0;
      break;
    }
    steps -= 1 + static_cast<std::uint64_t>(extra);
    --g;
    --steps;
  }
  return MorrisCounter(x.base(), g + y.value());
}

SignedMorrisCounter::SignedMorrisCounter(MorrisCounter ins, MorrisCounter del)
    : ins_(ins), del_(del) {
  if (ins.base() != del.base()) {
    throw ParameterError("signed counter halves need a common base");
  }
}

void SignedMorrisCounter::add(std::int64_t v, Rng& rng) {
  if (v >= 0) {
    ins_.add_batch(static_cast<std::uint64_t>(v), rng);
  } else {
    del_.add_batch(0 - static_cast<std::uint64_t>(v), rng);
  }
}

void SignedMorrisCounter::add_magnitude(bool negative, std::uint64_t magnitude,
                                        Rng& rng) {
  (negative ? del_ : ins_).add_batch(magnitude, rng);
}

SignedMorrisCounter merge(const SignedMorrisCounter& x,
                          const SignedMorrisCounter& y, Rng& rng) {
  MorrisCounter ins = merge(x.ins(), y.ins(), rng);
  MorrisCounter del = merge(x.del(), y.del(), rng);
  return SignedMorrisCounter(ins, del);
}

std::uint64_t StreamingMorris::next_wait(Rng& rng) {
  const std::uint64_t level = counter_.value();
  if (level == 0) return 1;
  if (level >= rate_count_) {
    if (level > kMaxRateTable) {
      return morris_wait(level, std::log(counter_.base()), rng);
    }
    auto table = rate_table(counter_.base(), level);
    rates_ = table->rates.data();
    rate_count_ = table->rates.size();
    table_ = std::move(table);
  }
  boost::random::exponential_distribution<double> exponential;
  const double failures = std::floor(exponential(rng) / rates_[level]);
  if (!(failures < 1.8e19)) return kU64Max;
  return 1 + static_cast<std::uint64_t>(failures);
}

void StreamingMorris::advance(std::uint64_t u, Rng& rng) {
  if (pending_ == 0) pending_ = next_wait(rng);
  while (u >= pending_) {
    u -= pending_;
    ++counter_.value_;
    pending_ = next_wait(rng);
  }
  pending_ -= u;
}

void encode_counter(const MorrisCounter& c, std::uint8_t base_index,
                    BitWriter& out) {
  out.put_bits(base_index, kMorrisBaseIndexBits);
  elias_gamma_encode(c.value() + 1, out);
}

namespace {

double lookup_base(std::uint64_t index, std::span<const double> bases) {
  if (index >= bases.size()) {
    throw ParameterError("unknown Morris base index " + std::to_string(index));
  }
  return bases[index];
}

}  // namespace

MorrisCounter decode_counter(BitReader& in, std::span<const double> bases) {
  const double base = lookup_base(in.get_bits(kMorrisBaseIndexBits), bases);
  return MorrisCounter(base, elias_gamma_decode(in) - 1);
}

void encode_signed_counter(const SignedMorrisCounter& c,
                           std::uint8_t base_index, BitWriter& out) {
  out.put_bits(base_index, kMorrisBaseIndexBits);
  elias_gamma_encode(c.ins().value() + 1, out);
  elias_gamma_encode(c.del().value() + 1, out);
}

SignedMorrisCounter decode_signed_counter(BitReader& in,
                                          std::span<const double> bases) {
  const double base = lookup_base(in.get_bits(kMorrisBaseIndexBits), bases);
  const std::uint64_t ins = elias_gamma_decode(in) - 1;
  const std::uint64_t del = elias_gamma_decode(in) - 1;
  return SignedMorrisCounter(MorrisCounter(base, ins), MorrisCounter(base, del));
}

}  // namespace mpsketch
