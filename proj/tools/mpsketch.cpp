// mpsketch: simulate the distributed protocols, run the streaming
// estimators and measure per-edge communication.
//
// Exit codes: 0 completed, 1 runtime error, 2 bad usage, 3 a --check
// threshold was missed.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mpsketch/entropy.hpp"
#include "mpsketch/errors.hpp"
#include "mpsketch/harness/comms.hpp"
#include "mpsketch/harness/experiment.hpp"
#include "mpsketch/harness/report.hpp"

namespace {

using namespace mpsketch;
using namespace mpsketch::harness;

constexpr int kBadUsage = 2;
constexpr int kCheckFailed = 3;

struct OutputOptions {
  std::string format = "csv";
  std::string output = "-";
  bool check = false;
  bool timing = false;
  std::string units = "nats";
};

struct Command {
  ExperimentSpec spec;
  OutputOptions out;
  std::string codec = "rounded";
  std::string mode = "exact-y";
  std::string planted;
};

void add_common(CLI::App* app, Command& c, bool network) {
  ExperimentSpec& s = c.spec;
  app->add_option("--eps", s.eps, "Accuracy parameter")->capture_default_str();
  app->add_option("--n", s.n, "Dimension")->capture_default_str();
  app->add_option("--dist", s.dist,
                  "zipf:s | uniform:v | sparse:d | planted:V:C | values:a,b,.. "
                  "| file:PATH")
      ->capture_default_str();
  app->add_option("--items", s.items, "Units drawn by zipf inputs and streams")
      ->capture_default_str();
  app->add_option("--trials", s.trials)->capture_default_str();
  app->add_option("--seed", s.seed)->capture_default_str();
  app->add_option("--k", s.k, "Sketch row override (0: derived)");
  app->add_option("--out", c.out.format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app->add_option("-o,--output", c.out.output,
                  "Report path ('-' for stdout); CSV runs also write "
                  "PATH.summary.json")
      ->capture_default_str();
  app->add_flag("--check", c.out.check,
                "Exit with status 3 when the success rate misses its "
                "acceptance threshold");
  app->add_flag("--timing", c.out.timing, "Add wall-clock columns");
  if (network) {
    app->add_option("--topology", s.topology,
                    "line | star | tree | grid | grid:RxC | random[:p] | file:PATH")
        ->capture_default_str();
    app->add_option("--m", s.m, "Number of players")->capture_default_str();
    app->add_option("--holders", s.holders,
                    "Data-holding players spread evenly over the vertices "
                    "(0: all)");
    app->add_option("--M", s.max_entry, "Cap on aggregate entries (0: none)");
    app->add_option("--codec", c.codec, "Edge codec")
        ->check(CLI::IsMember({"rounded", "exact"}))
        ->capture_default_str();
  }
}

void scale_entropy_units(ExperimentResult& r) {
  for (TrialReport& t : r.trials) {
    t.estimate *= kNatsToBits;
    t.exact *= kNatsToBits;
    t.abs_error *= kNatsToBits;
  }
  r.summary.abs_error_median *= kNatsToBits;
}

int emit(Command& c) {
  c.spec.codec = c.codec == "exact" ? Codec::kExact : Codec::kRounded;
  c.spec.mode = c.mode == "morris-y" ? YMode::kMorris : YMode::kExact;
  if (!c.planted.empty()) c.spec.dist = "planted:" + c.planted;
  if (c.spec.updates_file.rfind("file:", 0) == 0) {
    c.spec.updates_file = c.spec.updates_file.substr(5);
  }

  ExperimentResult r = run_experiment(c.spec, 0, c.out.timing);
  const bool entropy = c.spec.protocol == Protocol::kEntropy ||
                       c.spec.protocol == Protocol::kStreamEntropy;
  if (entropy && c.out.units == "bits") scale_entropy_units(r);

  const std::string body = c.out.format == "json" ? to_json(r, c.out.timing)
                                                  : to_csv(r, c.out.timing);
  if (c.out.output == "-") {
    std::cout << body;
  } else {
    write_text_file(c.out.output, body);
    if (c.out.format == "csv") {
      write_text_file(c.out.output + ".summary.json",
                      summary_json(r, c.out.timing));
    }
  }
  const Summary& s = r.summary;
  std::fprintf(stderr,
               "%s: %zu/%zu successes (rate %.3f, threshold %.3f), median "
               "rel_error %.4g, mean max_edge_bits %.1f\n",
               protocol_name(c.spec.protocol).c_str(), s.successes, s.trials,
               s.success_rate, s.threshold, s.rel_error_median,
               s.mean_max_edge_bits);
  if (c.out.check && !s.meets_threshold) {
    std::fprintf(stderr, "check failed: success rate below threshold\n");
    return kCheckFailed;
  }
  return 0;
}

std::vector<std::size_t> parse_depths(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stoul(tok));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Communication-efficient moment estimation over networks"};
  app.require_subcommand(1);

  auto* simulate = app.add_subcommand("simulate", "Distributed protocols");
  simulate->require_subcommand(1);
  auto* stream = app.add_subcommand("stream", "Streaming estimators");
  stream->require_subcommand(1);
  auto* bench = app.add_subcommand("bench", "Communication measurements");
  bench->require_subcommand(1);

  Command fp, hh, ent, amp, sfp, sent;
  fp.spec.protocol = Protocol::kFp;
  hh.spec.protocol = Protocol::kHeavyHitters;
  hh.spec.eps = 0.25;
  hh.spec.topology = "grid:8x8";
  hh.spec.m = 64;
  hh.spec.dist = "planted:1000:1";
  ent.spec.protocol = Protocol::kEntropy;
  ent.spec.eps = 0.2;
  amp.spec.protocol = Protocol::kAmp;
  amp.spec.eps = 0.25;
  amp.spec.n = 500;
  amp.spec.dist = "sparse:0.2";
  sfp.spec.protocol = Protocol::kStreamFp;
  sfp.spec.p = 0.5;
  sfp.spec.eps = 0.15;
  sfp.spec.dist = "zipf:1.3";
  sfp.spec.items = 100000;
  sent.spec.protocol = Protocol::kStreamEntropy;
  sent.spec.eps = 0.2;

  auto* c_fp = simulate->add_subcommand("fp", "F_p, p in (0, 1) or (1, 2]");
  add_common(c_fp, fp, true);
  c_fp->add_option("--p", fp.spec.p)->capture_default_str();

  auto* c_hh = simulate->add_subcommand("hh", "Point estimates and heavy hitters");
  add_common(c_hh, hh, true);
  c_hh->add_option("--planted", hh.planted,
                   "VALUE:COUNT planted coordinates among unit ones");

  auto* c_ent = simulate->add_subcommand("entropy", "Shannon entropy");
  add_common(c_ent, ent, true);
  c_ent->add_option("--units", ent.out.units, "Reported entropy unit")
      ->check(CLI::IsMember({"nats", "bits"}))
      ->capture_default_str();

  auto* c_amp = simulate->add_subcommand("amp", "Approximate matrix product");
  add_common(c_amp, amp, true);
  c_amp->add_option("--t1", amp.spec.t1)->capture_default_str();
  c_amp->add_option("--t2", amp.spec.t2)->capture_default_str();
  c_amp->add_option("--x", amp.spec.x_file, "X as a dense text file")
      ->check(CLI::ExistingFile);
  c_amp->add_option("--y", amp.spec.y_file, "Y as a dense text file")
      ->check(CLI::ExistingFile);

  auto* c_sfp = stream->add_subcommand("fp", "Log-cosine ||X||_p estimator");
  add_common(c_sfp, sfp, false);
  c_sfp->add_option("--p", sfp.spec.p)->capture_default_str();
  c_sfp->add_option("--mode", sfp.mode, "How y = S X is stored")
      ->check(CLI::IsMember({"exact-y", "morris-y"}))
      ->capture_default_str();
  c_sfp->add_option("--updates", sfp.spec.updates_file,
                    "file:PATH with one 'i delta' pair per line");

  auto* c_sent = stream->add_subcommand("entropy", "Streaming entropy");
  add_common(c_sent, sent, false);
  c_sent->add_option("--updates", sent.spec.updates_file,
                     "file:PATH with one 'i delta' pair per line");
  c_sent->add_option("--units", sent.out.units, "Reported entropy unit")
      ->check(CLI::IsMember({"nats", "bits"}))
      ->capture_default_str();

  CommScalingSpec comms;
  std::string depths = "4,16,64,256";
  std::string comms_format = "csv";
  std::string comms_output = "-";
  auto* c_comms = bench->add_subcommand(
      "comms", "Per-edge bits of F_p on lines of growing depth");
  c_comms->add_option("--p", comms.p)->capture_default_str();
  c_comms->add_option("--eps", comms.eps)->capture_default_str();
  c_comms->add_option("--depths", depths)->capture_default_str();
  c_comms->add_option("--n", comms.n)->capture_default_str();
  c_comms->add_option("--dist", comms.dist)->capture_default_str();
  c_comms->add_option("--items", comms.items)->capture_default_str();
  c_comms->add_option("--trials", comms.trials)->capture_default_str();
  c_comms->add_option("--seed", comms.seed)->capture_default_str();
  c_comms->add_option("--out", comms_format)
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  c_comms->add_option("-o,--output", comms_output)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help arrives here too, with exit code 0.
    return app.exit(e) == 0 ? 0 : kBadUsage;
  }

  try {
    for (auto [cmd, c] : {std::pair{c_fp, &fp}, {c_hh, &hh}, {c_ent, &ent},
                          {c_amp, &amp}, {c_sfp, &sfp}, {c_sent, &sent}}) {
      if (cmd->parsed()) return emit(*c);
    }
    if (c_comms->parsed()) {
      comms.depths = parse_depths(depths);
      const auto points = comm_scaling(comms);
      std::vector<double> x, y;
      for (const auto& pt : points) {
        x.push_back(static_cast<double>(pt.depth));
        y.push_back(pt.bits_per_row);
      }
      const LogFit fit = points.size() >= 2 ? fit_log_linear(x, y) : LogFit{};
      const std::string body = comms_format == "json" ? comm_json(points, fit)
                                                      : comm_csv(points);
      if (comms_output == "-") {
        std::cout << body;
      } else {
        write_text_file(comms_output, body);
      }
      std::fprintf(stderr,
                   "fit bits_per_row = %.4g + %.4g ln d, max residual %.3f\n",
                   fit.a, fit.b, fit.max_relative_residual);
      return 0;
    }
  } catch (const ParameterError& e) {
    std::fprintf(stderr, "mpsketch: %s\n", e.what());
    return kBadUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "mpsketch: %s\n", e.what());
    return 1;
  }
  return 0;
}
