#include "mpsketch/harness/report.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include "json.hpp"

#include "mpsketch/errors.hpp"

namespace mpsketch::harness {

namespace {

std::string real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// JSON has no infinities; they are written as null.
nlohmann::json jreal(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::json spec_json(const ExperimentSpec& s) {
  nlohmann::json j;
  j["protocol"] = protocol_name(s.protocol);
  j["topology"] = s.topology;
  j["m"] = s.m;
  j["n"] = s.n;
  j["max_entry"] = s.max_entry;
  j["dist"] = s.dist;
  j["items"] = s.items;
  j["eps"] = s.eps;
  j["p"] = s.p;
  j["trials"] = s.trials;
  j["seed"] = s.seed;
  j["codec"] = s.codec == Codec::kExact ? "exact" : "rounded";
  j["mode"] = s.mode == YMode::kMorris ? "morris-y" : "exact-y";
  j["t1"] = s.t1;
  j["t2"] = s.t2;
  j["updates"] = s.updates_file;
  j["x_file"] = s.x_file;
  j["y_file"] = s.y_file;
  j["holders"] = s.holders;
  j["k"] = s.k;
  return j;
}

nlohmann::json summary_object(const Summary& s, bool timing) {
  nlohmann::json j;
  j["trials"] = s.trials;
  j["successes"] = s.successes;
  j["success_rate"] = s.success_rate;
  j["threshold"] = s.threshold;
  j["meets_threshold"] = s.meets_threshold;
  j["rel_error_median"] = jreal(s.rel_error_median);
  j["rel_error_p90"] = jreal(s.rel_error_p90);
  j["rel_error_max"] = jreal(s.rel_error_max);
  j["abs_error_median"] = jreal(s.abs_error_median);
  j["mean_max_edge_bits"] = s.mean_max_edge_bits;
  j["max_max_edge_bits"] = s.max_max_edge_bits;
  j["mean_total_bits"] = s.mean_total_bits;
  j["mean_rounds"] = s.mean_rounds;
  if (timing) j["wall_seconds"] = s.wall_seconds;
  return j;
}

}  // namespace

std::string to_csv(const ExperimentResult& result, bool timing) {
  std::string out =
      "schema_version,protocol,trial,estimate,exact,rel_error,abs_error,"
      "success,max_edge_bits,total_bits,rounds";
  out += timing ? ",wall_seconds\n" : "\n";
  const std::string name = protocol_name(result.spec.protocol);
  for (const TrialReport& t : result.trials) {
    out += std::to_string(kCsvSchemaVersion) + ',' + name + ',' +
           std::to_string(t.trial) + ',' + real(t.estimate) + ',' +
           real(t.exact) + ',' + real(t.rel_error) + ',' + real(t.abs_error) +
           ',' + (t.success ? "1" : "0") + ',' +
           std::to_string(t.max_edge_bits) + ',' +
           std::to_string(t.total_bits) + ',' + std::to_string(t.rounds);
    if (timing) out += ',' + real(t.wall_seconds);
    out += '\n';
  }
  return out;
}

std::string summary_json(const ExperimentResult& result, bool timing) {
  nlohmann::json j;
  j["schema_version"] = kCsvSchemaVersion;
  j["spec"] = spec_json(result.spec);
  j["summary"] = summary_object(result.summary, timing);
  return j.dump(2) + "\n";
}

std::string to_json(const ExperimentResult& result, bool timing) {
  nlohmann::json j;
  j["schema_version"] = kCsvSchemaVersion;
  j["spec"] = spec_json(result.spec);
  j["summary"] = summary_object(result.summary, timing);
  nlohmann::json rows = nlohmann::json::array();
  for (const TrialReport& t : result.trials) {
    nlohmann::json r;
    r["trial"] = t.trial;
    r["estimate"] = jreal(t.estimate);
    r["exact"] = jreal(t.exact);
    r["rel_error"] = jreal(t.rel_error);
    r["abs_error"] = jreal(t.abs_error);
    r["success"] = t.success;
    r["max_edge_bits"] = t.max_edge_bits;
    r["total_bits"] = t.total_bits;
    r["rounds"] = t.rounds;
    if (timing) r["wall_seconds"] = t.wall_seconds;
    rows.push_back(std::move(r));
  }
  j["trials"] = std::move(rows);
  return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot open '" + path + "' for writing: " +
                std::strerror(errno));
  }
  out << text;
  out.close();
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace mpsketch::harness
