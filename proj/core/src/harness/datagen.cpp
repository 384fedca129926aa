#include "mpsketch/harness/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mpsketch/errors.hpp"
#include "mpsketch/rng.hpp"

namespace mpsketch::harness {

namespace {

double parse_double(const std::string& s, const std::string& spec) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw ParameterError("");
    return v;
  } catch (const std::exception&) {
    throw ParameterError("bad number '" + s + "' in distribution '" + spec +
                         "'");
  }
}

std::uint64_t parse_u64(const std::string& s, const std::string& spec) {
  const double v = parse_double(s, spec);
  if (!(v >= 0.0) || v != std::floor(v) || v > 1.8e19) {
    throw ParameterError("expected a non-negative integer, got '" + s +
                         "' in '" + spec + "'");
  }
  return static_cast<std::uint64_t>(v);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

std::vector<std::uint64_t> read_values_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open data file '" + path + "'");
  std::vector<std::uint64_t> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_u64(tok, "file:" + path));
  return out;
}

/// Inverse-CDF sampler over exactly normalized (i+1)^-s probabilities.
class Zipf {
 public:
  Zipf(std::size_t n, double s) : cdf_(n) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      acc += std::pow(static_cast<long double>(i + 1), -static_cast<long double>(s));
      cdf_[i] = acc;
    }
    for (auto& c : cdf_) c /= acc;
    cdf_.back() = 1.0L;
  }
  std::size_t operator()(Rng& rng) const {
    const long double u = rng.uniform();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()),
                                 cdf_.size() - 1);
  }

 private:
  std::vector<long double> cdf_;
};

}  // namespace

DistSpec parse_dist(const std::string& spec) {
  DistSpec d;
  d.text = spec;
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string rest =
      colon == std::string::npos ? std::string() : spec.substr(colon + 1);
  if (head == "zipf") {
    d.kind = DistSpec::Kind::kZipf;
    d.param = rest.empty() ? 1.1 : parse_double(rest, spec);
    if (!(d.param >= 0.0)) throw ParameterError("zipf exponent must be >= 0");
  } else if (head == "uniform") {
    d.kind = DistSpec::Kind::kUniform;
    d.planted_value = rest.empty() ? 1 : parse_u64(rest, spec);
  } else if (head == "sparse") {
    d.kind = DistSpec::Kind::kSparse;
    d.param = rest.empty() ? 0.1 : parse_double(rest, spec);
    if (!(d.param >= 0.0 && d.param <= 1.0)) {
      throw ParameterError("sparse density must lie in [0, 1]");
    }
  } else if (head == "planted") {
    d.kind = DistSpec::Kind::kPlanted;
    const auto parts = split(rest, ':');
    if (parts.size() != 2) {
      throw ParameterError("planted expects planted:VALUE:COUNT, got '" +
                           spec + "'");
    }
    d.planted_value = parse_u64(parts[0], spec);
    d.planted_count = parse_u64(parts[1], spec);
  } else if (head == "values") {
    d.kind = DistSpec::Kind::kValues;
    for (const auto& tok : split(rest, ',')) {
      if (!tok.empty()) d.values.push_back(parse_u64(tok, spec));
    }
  } else if (head == "file") {
    d.kind = DistSpec::Kind::kFile;
    d.path = rest;
    d.values = read_values_file(rest);
  } else {
    throw ParameterError("unknown distribution '" + spec + "'");
  }
  return d;
}

std::vector<std::uint64_t> generate_aggregate(const DistSpec& dist,
                                              std::size_t n, std::size_t items,
                                              std::uint64_t seed) {
  if (n == 0) throw ParameterError("dimension n must be >= 1");
  std::vector<std::uint64_t> x(n, 0);
  Rng rng(derive_seed(seed, {stream_tag::kData, 0}));
  switch (dist.kind) {
    case DistSpec::Kind::kZipf: {
      const Zipf z(n, dist.param);
      for (std::size_t t = 0; t < items; ++t) ++x[z(rng)];
      break;
    }
    case DistSpec::Kind::kUniform:
      std::fill(x.begin(), x.end(), dist.planted_value);
      break;
    case DistSpec::Kind::kSparse:
      for (auto& v : x) {
        if (rng.bernoulli(dist.param)) v = 1 + rng.below(10);
      }
      break;
    case DistSpec::Kind::kPlanted: {
      if (dist.planted_count > n) {
        throw ParameterError("more planted coordinates than n");
      }
      std::fill(x.begin(), x.end(), 1);
      // Partial Fisher-Yates picks the planted positions.
      std::vector<std::size_t> perm(n);
      for (std::size_t i = 0; i < n; ++i) perm[i] = i;
      for (std::size_t i = 0; i < dist.planted_count; ++i) {
        std::swap(perm[i], perm[i + rng.below(n - i)]);
        x[perm[i]] = dist.planted_value;
      }
      break;
    }
    case DistSpec::Kind::kValues:
    case DistSpec::Kind::kFile:
      if (dist.values.size() > n) {
        throw ParameterError("distribution '" + dist.text + "' has " +
                             std::to_string(dist.values.size()) +
                             " values but n = " + std::to_string(n));
      }
      std::copy(dist.values.begin(), dist.values.end(), x.begin());
      break;
  }
  return x;
}

VectorInputs split_among_players(const std::vector<std::uint64_t>& agg,
                                 std::size_t m, std::uint64_t seed) {
  if (m == 0) throw ParameterError("need at least one player");
  constexpr std::uint64_t kPerUnitLimit = std::uint64_t{1} << 20;
  std::vector<std::vector<std::uint64_t>> dense(
      m, std::vector<std::uint64_t>(agg.size(), 0));
  Rng rng(derive_seed(seed, {stream_tag::kData, 1}));
  for (std::size_t j = 0; j < agg.size(); ++j) {
    std::uint64_t units = agg[j];
    if (units > kPerUnitLimit) {
      const std::uint64_t share = units / m;
      for (std::size_t v = 0; v < m; ++v) dense[v][j] += share;
      units -= share * m;
    }
    for (std::uint64_t u = 0; u < units; ++u) ++dense[rng.below(m)][j];
  }
  VectorInputs out;
  out.reserve(m);
  for (const auto& d : dense) out.push_back(SparseVector::from_dense(d));
  return out;
}

namespace {

template <typename T>
std::vector<T> place(std::vector<T> inputs, std::size_t m) {
  const std::size_t h = inputs.size();
  if (h == 0 || h > m) throw ParameterError("holders must lie in [1, m]");
  std::vector<T> out(m);
  for (std::size_t j = 0; j < h; ++j) {
    out[(2 * j + 1) * m / (2 * h)] = std::move(inputs[j]);
  }
  return out;
}

}  // namespace

VectorInputs place_holders(VectorInputs inputs, std::size_t m) {
  const std::size_t dim = inputs.empty() ? 0 : inputs.front().dim;
  VectorInputs out = place(std::move(inputs), m);
  for (auto& v : out) v.dim = dim;
  return out;
}

MatrixInputs place_holders(MatrixInputs inputs, std::size_t m) {
  const std::size_t rows = inputs.empty() ? 0 : inputs.front().rows;
  const std::size_t cols = inputs.empty() ? 0 : inputs.front().cols;
  MatrixInputs out = place(std::move(inputs), m);
  for (auto& x : out) {
    x.rows = rows;
    x.cols = cols;
  }
  return out;
}

std::vector<std::uint64_t> generate_matrix(const DistSpec& dist, std::size_t n,
                                           std::size_t t, std::size_t items,
                                           std::uint64_t seed) {
  std::vector<std::uint64_t> out(n * t, 0);
  for (std::size_t c = 0; c < t; ++c) {
    const auto col = generate_aggregate(dist, n, items, derive_seed(seed, {c}));
    for (std::size_t r = 0; r < n; ++r) out[r * t + c] = col[r];
  }
  return out;
}

std::vector<std::uint64_t> read_matrix_file(const std::string& path,
                                            std::size_t& n, std::size_t& t) {
  const auto vals = read_values_file(path);
  if (vals.size() < 2) throw Error("matrix file '" + path + "' lacks a header");
  n = vals[0];
  t = vals[1];
  if (vals.size() != 2 + n * t) {
    throw Error("matrix file '" + path + "' declares " + std::to_string(n) +
                "x" + std::to_string(t) + " but holds " +
                std::to_string(vals.size() - 2) + " values");
  }
  return {vals.begin() + 2, vals.end()};
}

MatrixInputs split_matrix_among_players(const std::vector<std::uint64_t>& agg,
                                        std::size_t n, std::size_t t,
                                        std::size_t m, std::uint64_t seed) {
  const VectorInputs flat = split_among_players(agg, m, seed);
  MatrixInputs out;
  out.reserve(m);
  for (const auto& v : flat) {
    out.push_back(SparseMatrix::from_dense(n, t, v.to_dense()));
  }
  return out;
}

std::vector<StreamUpdate> generate_stream(const DistSpec& dist, std::size_t n,
                                          std::size_t items,
                                          std::uint64_t seed) {
  std::vector<StreamUpdate> out;
  if (dist.kind == DistSpec::Kind::kZipf) {
    const Zipf z(n, dist.param);
    Rng rng(derive_seed(seed, {stream_tag::kData, 2}));
    out.reserve(items);
    for (std::size_t t = 0; t < items; ++t) {
      out.push_back({static_cast<std::uint32_t>(z(rng)), 1});
    }
    return out;
  }
  const auto agg = generate_aggregate(dist, n, items, seed);
  for (std::size_t j = 0; j < agg.size(); ++j) {
    for (std::uint64_t u = 0; u < agg[j]; ++u) {
      out.push_back({static_cast<std::uint32_t>(j), 1});
    }
  }
  Rng rng(derive_seed(seed, {stream_tag::kData, 3}));
  for (std::size_t i = out.size(); i > 1; --i) {
    std::swap(out[i - 1], out[rng.below(i)]);
  }
  return out;
}

std::vector<StreamUpdate> read_stream_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open stream file '" + path + "'");
  std::vector<StreamUpdate> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string a, b, extra;
    if (!(ls >> a)) continue;
    if (!(ls >> b) || (ls >> extra)) {
      throw Error(path + ":" + std::to_string(lineno) +
                  ": expected 'i delta'");
    }
    const std::uint64_t item = parse_u64(a, path);
    if (item > UINT32_MAX) {
      throw Error(path + ":" + std::to_string(lineno) + ": item out of range");
    }
    out.push_back({static_cast<std::uint32_t>(item), parse_u64(b, path)});
  }
  return out;
}

std::vector<std::uint64_t> stream_aggregate(
    const std::vector<StreamUpdate>& updates, std::size_t n) {
  std::vector<std::uint64_t> x(n, 0);
  for (const auto& u : updates) {
    if (u.item >= n) throw ParameterError("stream item out of range");
    x[u.item] += u.delta;
  }
  return x;
}

}  // namespace mpsketch::harness
