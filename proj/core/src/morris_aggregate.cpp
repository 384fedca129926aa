#include "mpsketch/morris_aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mpsketch/errors.hpp"
#include "mpsketch/rng.hpp"

namespace mpsketch {

SignedUpdate to_signed_update(long double value) noexcept {
  SignedUpdate u;
  u.negative = value < 0.0L;
  const long double a = std::nearbyint(std::fabs(value));
  constexpr long double kMax = 18446744073709551615.0L;
  u.magnitude = a >= kMax ? UINT64_MAX : static_cast<std::uint64_t>(a);
  return u;
}

namespace {

struct CounterBundle {
  std::vector<SignedMorrisCounter> counters;  // empty: all-zero subtree
  std::uint64_t bits = 0;
};

}  // namespace

MorrisAggregateResult morris_convergecast(
    const SpanningTree& tree,
    const std::vector<std::vector<SignedUpdate>>& local, std::size_t width,
    const MorrisAggregateOptions& options) {
  if (local.size() != tree.vertex_count()) {
    throw ParameterError("one local batch list per vertex is required");
  }
  for (const auto& v : local) {
    if (!v.empty() && v.size() != width) {
      throw ParameterError("local batch lists must have the common width");
    }
  }
  if (options.tail_width > width) {
    throw ParameterError("tail_width exceeds the bundle width");
  }
  const std::size_t head = width - options.tail_width;
  std::vector<SignedMorrisCounter> fresh(head, SignedMorrisCounter(options.base));
  fresh.resize(width, SignedMorrisCounter(options.tail_base));

  MorrisAggregateResult result;
  auto node = [&](const NodeContext& ctx, const std::vector<SignedUpdate>& own,
                  std::span<CounterBundle> children) -> CounterBundle {
    CounterBundle out;
    bool any = !own.empty();
    for (const CounterBundle& c : children) any = any || !c.counters.empty();
    if (!any) {
      out.bits = 1;
      return out;
    }
    out.counters = fresh;
    out.bits = 1;
    for (std::size_t i = 0; i < width; ++i) {
      Rng rng(derive_seed(options.seed, {stream_tag::kMorris, ctx.vertex, i}));
      SignedMorrisCounter& acc = out.counters[i];
      for (const CounterBundle& c : children) {
        if (!c.counters.empty()) acc = merge(acc, c.counters[i], rng);
      }
      if (!own.empty()) {
        acc.add_magnitude(own[i].negative, own[i].magnitude, rng);
      }
      const std::uint64_t top = std::max(acc.ins().value(), acc.del().value());
      result.max_counter_value = std::max(result.max_counter_value, top);
      if (top > options.value_cap) {
        throw CounterOverflow("Morris counter value " + std::to_string(top) +
                              " exceeds the cap " +
                              std::to_string(options.value_cap));
      }
      if (!ctx.is_root) {
        const std::size_t bits =
            options.signed_counters && i < head
                ? signed_counter_bits(acc.ins().value(), acc.del().value())
                : morris_counter_bits(acc.ins().value());
        out.bits += bits;
        result.max_message_bits = std::max(result.max_message_bits, bits);
      }
    }
    return out;
  };

  auto run = run_convergecast<CounterBundle>(
      tree, local, node, [](const CounterBundle& b) { return b.bits; });
  result.root =
      run.root.counters.empty() ? fresh : std::move(run.root.counters);
  result.stats = std::move(run.stats);
  return result;
}

}  // namespace mpsketch
