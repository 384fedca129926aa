#include "mpsketch/rounded_aggregate.hpp"

#include <algorithm>
#include <cmath>

#include "mpsketch/errors.hpp"
#include "mpsketch/rng.hpp"

namespace mpsketch {
namespace {

struct Bundle {
  std::vector<double> values;  // empty when the subtree is all zero
  std::uint64_t bits = 0;
};

}  // namespace

std::size_t max_rounded_message_bits(const RoundingParams& params) noexcept {
  const std::uint64_t widest =
      std::max(zigzag_encode(params.exponent_min),
               zigzag_encode(params.exponent_max));
  return 2 + elias_gamma_length(widest + 1);
}

AggregateResult rounded_convergecast(
    const SpanningTree& tree, const std::vector<std::vector<double>>& local,
    std::size_t width, const AggregateOptions& options) {
  if (local.size() != tree.vertex_count()) {
    throw ParameterError("one local vector per vertex is required");
  }
  for (const auto& v : local) {
    if (!v.empty() && v.size() != width) {
      throw ParameterError("local vectors must have the common width");
    }
  }
  if (options.codec == Codec::kRounded) options.rounding.validate();

  AggregateResult result;
  const double m = static_cast<double>(tree.vertex_count());
  const bool exact = options.codec == Codec::kExact;

  auto node = [&](const NodeContext& ctx, const std::vector<double>& own,
                  std::span<Bundle> children) -> Bundle {
    Bundle out;
    bool any = !own.empty();
    for (const Bundle& c : children) any = any || !c.values.empty();
    if (!any) {
      out.bits = 1;
      return out;
    }
    out.values = own.empty() ? std::vector<double>(width, 0.0) : own;
    for (const Bundle& c : children) {
      if (c.values.empty()) continue;
      for (std::size_t i = 0; i < width; ++i) out.values[i] += c.values[i];
    }
    if (ctx.is_root) return out;

    out.bits = 1;
    for (std::size_t i = 0; i < width; ++i) {
      double& r = out.values[i];
      std::size_t bits = 0;
      if (exact) {
        bits = kBaselineScalarBits;
      } else {
        const double kept =
            truncate_message(r, ctx.layer, ctx.depth, m, options.log_k);
        if (kept == 0.0 && r != 0.0) ++result.truncated;
        Rng rng(derive_seed(options.seed,
                            {stream_tag::kRounding, ctx.vertex, i}));
        const RoundedMessage msg =
            round_stochastic(kept, options.rounding, rng);
        bits = encoded_length(msg);
        r = decode(msg, options.rounding);
      }
      out.bits += bits;
      result.max_message_bits = std::max(result.max_message_bits, bits);
    }
    return out;
  };

  auto run = run_convergecast<Bundle>(tree, local, node,
                                      [](const Bundle& b) { return b.bits; });
  result.root = run.root.values.empty() ? std::vector<double>(width, 0.0)
                                        : std::move(run.root.values);
  result.stats = std::move(run.stats);
  return result;
}

}  // namespace mpsketch
