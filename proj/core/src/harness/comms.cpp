#include "mpsketch/harness/comms.hpp"

#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "mpsketch/errors.hpp"
#include "mpsketch/fp_high.hpp"
#include "mpsketch/harness/experiment.hpp"

namespace mpsketch::harness {

std::vector<CommPoint> comm_scaling(const CommScalingSpec& spec,
                                    std::size_t threads) {
  if (!(spec.p > 1.0 && spec.p <= 2.0)) {
    throw ParameterError("comm scaling runs the p in (1, 2] protocol");
  }
  std::vector<CommPoint> out;
  for (std::size_t d : spec.depths) {
    if (d < 1) throw ParameterError("depths must be >= 1");
    ExperimentSpec e;
    e.protocol = Protocol::kFp;
    e.topology = "line";
    e.m = 2 * d + 1;
    e.n = spec.n;
    e.dist = spec.dist;
    e.items = spec.items;
    e.eps = spec.eps;
    e.p = spec.p;
    e.trials = spec.trials;
    e.seed = spec.seed;
    const ExperimentResult rounded = run_experiment(e, threads);
    e.codec = Codec::kExact;
    const ExperimentResult exact = run_experiment(e, threads);

    FpHighConfig cfg;
    cfg.p = spec.p;
    cfg.eps = spec.eps;
    CommPoint pt;
    pt.depth = d;
    pt.m = e.m;
    pt.k = cfg.rows();
    pt.trials = spec.trials;
    pt.mean_max_edge_bits = rounded.summary.mean_max_edge_bits;
    pt.bits_per_row = pt.mean_max_edge_bits / static_cast<double>(pt.k);
    pt.baseline_bits_per_row =
        exact.summary.mean_max_edge_bits / static_cast<double>(pt.k);
    out.push_back(pt);
  }
  return out;
}

LogFit fit_log_linear(const std::vector<double>& x,
                      const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ParameterError("log fit needs two or more matching points");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    sx += lx;
    sy += y[i];
    sxx += lx * lx;
    sxy += lx * y[i];
  }
  LogFit f;
  const double denom = n * sxx - sx * sx;
  f.b = denom == 0.0 ? 0.0 : (n * sxy - sx * sy) / denom;
  f.a = (sy - f.b * sx) / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = std::abs(y[i] - (f.a + f.b * std::log(x[i]))) / y[i];
    f.max_relative_residual = std::max(f.max_relative_residual, r);
  }
  return f;
}

std::string comm_csv(const std::vector<CommPoint>& points) {
  std::string out =
      "depth,m,k,trials,mean_max_edge_bits,bits_per_row,baseline_bits_per_row\n";
  char buf[256];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%zu,%zu,%.17g,%.17g,%.17g\n",
                  p.depth, p.m, p.k, p.trials, p.mean_max_edge_bits,
                  p.bits_per_row, p.baseline_bits_per_row);
    out += buf;
  }
  return out;
}

std::string comm_json(const std::vector<CommPoint>& points, const LogFit& fit) {
  nlohmann::json j;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& p : points) {
    rows.push_back({{"depth", p.depth},
                    {"m", p.m},
                    {"k", p.k},
                    {"trials", p.trials},
                    {"mean_max_edge_bits", p.mean_max_edge_bits},
                    {"bits_per_row", p.bits_per_row},
                    {"baseline_bits_per_row", p.baseline_bits_per_row}});
  }
  j["points"] = std::move(rows);
  j["fit"] = {{"a", fit.a},
              {"b", fit.b},
              {"max_relative_residual", fit.max_relative_residual}};
  return j.dump(2) + "\n";
}

}  // namespace mpsketch::harness
