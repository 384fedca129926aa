#include "mpsketch/matrix_product.hpp"

#include <cmath>

#include "mpsketch/errors.hpp"

namespace mpsketch {

std::size_t AmpConfig::rows() const {
  if (k != 0) return k;
  const double e0 = eps0();
  return static_cast<std::size_t>(std::ceil(c_k / (delta * e0 * e0)));
}

void AmpConfig::validate() const {
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("AMP needs eps in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ParameterError("AMP needs delta in (0, 1)");
  }
  if (!(rounding_delta > 0.0 && rounding_delta < 1.0)) {
    throw ParameterError("AMP needs rounding_delta in (0, 1)");
  }
  if (!(c_k > 0.0)) throw ParameterError("c_k must be positive");
  if (rows() < 16) throw ParameterError("AMP needs k >= 16");
}

SketchMatrix amp_sketch(std::size_t n, const AmpConfig& cfg,
                        std::uint64_t seed) {
  return build_sketch(cfg.rows(), n, 2.0, cfg.eta,
                      derive_seed(seed, {stream_tag::kSketch}));
}

namespace {

double amp_scale(const SketchMatrix& s) {
  return s.eta() / std::sqrt(2.0 * static_cast<double>(s.rows()));
}

// Writes (S M)_{i,c} into out[offset + i * cols + c].
void sketch_columns(const SketchMatrix& s, const SparseMatrix& mat,
                    std::vector<double>& out, std::size_t offset) {
  const double scale = amp_scale(s);
  for (std::size_t i = 0; i < s.rows(); ++i) {
    const auto row = s.integral_row(i);
    double* dst = out.data() + offset + i * mat.cols;
    for (const auto& e : mat.entries) {
      dst[e.col] += row[e.row] * static_cast<double>(e.value);
    }
    for (std::size_t c = 0; c < mat.cols; ++c) dst[c] *= scale;
  }
}

std::vector<double> product_from_sketches(const std::vector<double>& cells,
                                          std::size_t k, std::size_t t1,
                                          std::size_t t2) {
  std::vector<double> r(t1 * t2, 0.0);
  const double* sx = cells.data();
  const double* sy = cells.data() + k * t1;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t a = 0; a < t1; ++a) {
      const double xa = sx[i * t1 + a];
      if (xa == 0.0) continue;
      for (std::size_t b = 0; b < t2; ++b) r[a * t2 + b] += xa * sy[i * t2 + b];
    }
  }
  return r;
}

void check_shapes(const MatrixInputs& x, const MatrixInputs& y) {
  if (x.empty() || x.size() != y.size()) {
    throw ParameterError("AMP needs one X and one Y matrix per player");
  }
  for (std::size_t v = 0; v < x.size(); ++v) {
    if (x[v].rows != x[0].rows || x[v].cols != x[0].cols ||
        y[v].rows != x[0].rows || y[v].cols != y[0].cols) {
      throw ParameterError("AMP input shapes disagree across players");
    }
    if (x[v].cols == 0 || y[v].cols == 0 || x[v].rows == 0) {
      throw ParameterError("AMP needs n, t1, t2 >= 1");
    }
    x[v].validate();
    y[v].validate();
  }
}

}  // namespace

AmpResult amp_estimate(const MatrixInputs& x_inputs,
                       const MatrixInputs& y_inputs, const SpanningTree& tree,
                       const AmpConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  check_shapes(x_inputs, y_inputs);
  if (x_inputs.size() != tree.vertex_count()) {
    throw ParameterError("one input per vertex is required");
  }
  const std::size_t n = x_inputs[0].rows;
  AmpResult out;
  out.t1 = x_inputs[0].cols;
  out.t2 = y_inputs[0].cols;
  out.k = cfg.rows();
  const std::size_t width = out.k * (out.t1 + out.t2);

  const SketchMatrix s = amp_sketch(n, cfg, seed);
  std::vector<std::vector<double>> local(x_inputs.size());
  for (std::size_t v = 0; v < local.size(); ++v) {
    if (x_inputs[v].empty() && y_inputs[v].empty()) continue;
    local[v].assign(width, 0.0);
    sketch_columns(s, x_inputs[v], local[v], 0);
    sketch_columns(s, y_inputs[v], local[v], out.k * out.t1);
  }

  const double m = static_cast<double>(tree.vertex_count());
  const double max_in = static_cast<double>(
      std::max(max_entry(x_inputs), max_entry(y_inputs)));
  out.rounding = gamma_for(cfg.eps, cfg.rounding_delta, tree.depth,
                           static_cast<double>(n), m, cfg.c_exponent, max_in);
  AggregateOptions options;
  options.codec = cfg.codec;
  options.rounding = out.rounding;
  options.log_k = log_truncation_k(out.rounding.gamma, static_cast<double>(n),
                                   m, max_in);
  options.seed = derive_seed(seed, {stream_tag::kRounding});
  AggregateResult agg = rounded_convergecast(tree, local, width, options);
  out.product = product_from_sketches(agg.root, out.k, out.t1, out.t2);
  out.stats = std::move(agg.stats);
  out.max_message_bits = agg.max_message_bits;
  return out;
}

AmpResult amp_estimate(const MatrixInputs& x_inputs,
                       const MatrixInputs& y_inputs, const Topology& g,
                       const AmpConfig& cfg, std::uint64_t seed) {
  return amp_estimate(x_inputs, y_inputs, center_tree(g), cfg, seed);
}

std::vector<double> amp_standalone(const std::vector<std::uint64_t>& x,
                                   const std::vector<std::uint64_t>& y,
                                   std::size_t n, std::size_t t1,
                                   std::size_t t2, const AmpConfig& cfg,
                                   std::uint64_t seed) {
  cfg.validate();
  if (x.size() != n * t1 || y.size() != n * t2) {
    throw ParameterError("AMP aggregate shapes do not match n, t1, t2");
  }
  const std::size_t k = cfg.rows();
  const SketchMatrix s = amp_sketch(n, cfg, seed);
  std::vector<double> cells(k * (t1 + t2), 0.0);
  sketch_columns(s, SparseMatrix::from_dense(n, t1, x), cells, 0);
  sketch_columns(s, SparseMatrix::from_dense(n, t2, y), cells, k * t1);
  return product_from_sketches(cells, k, t1, t2);
}

}  // namespace mpsketch
