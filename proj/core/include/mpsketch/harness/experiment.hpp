#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mpsketch/fp_low.hpp"
#include "mpsketch/rounded_aggregate.hpp"

namespace mpsketch::harness {

enum class Protocol {
  kFp,             // simulate fp: fp_high for p in (1, 2], fp_low for p < 1
  kHeavyHitters,   // simulate hh
  kEntropy,        // simulate entropy
  kAmp,            // simulate amp
  kStreamFp,       // stream fp (log-cosine)
  kStreamEntropy,  // stream entropy
};

std::string protocol_name(Protocol p);

struct ExperimentSpec {
  Protocol protocol = Protocol::kFp;
  std::string topology = "star";
  std::size_t m = 16;
  std::size_t n = 1000;
  /// Cap on aggregate entries (0: none).
  std::uint64_t max_entry = 0;
  std::string dist = "zipf:1.1";
  /// Units drawn by zipf aggregates and streams.
  std::size_t items = 10000;
  double eps = 0.1;
  double p = 2.0;
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  Codec codec = Codec::kRounded;
  YMode mode = YMode::kExact;
  std::size_t t1 = 4;
  std::size_t t2 = 4;
  /// Stream file ("i delta" lines); replaces the generator when set.
  std::string updates_file;
  /// Dense matrix files for amp (header "n t"); replace the generator.
  std::string x_file;
  std::string y_file;
  /// Number of data-holding players (0: all m). Holders sit at evenly
  /// spaced vertex ids; the rest relay with empty inputs. Keeps the data
  /// partition fixed while the topology varies.
  std::size_t holders = 0;
  /// Sketch row override (0: protocol default).
  std::size_t k = 0;

  /// Throws ParameterError on invalid values and Error on missing files.
  void validate() const;
};

struct TrialReport {
  std::size_t trial = 0;
  double estimate = 0.0;
  double exact = 0.0;
  double rel_error = 0.0;
  double abs_error = 0.0;
  bool success = false;
  std::size_t max_edge_bits = 0;
  std::uint64_t total_bits = 0;
  std::size_t rounds = 0;
  /// Only measured when timing is requested; 0 otherwise.
  double wall_seconds = 0.0;
};

struct Summary {
  std::size_t trials = 0;
  std::size_t successes = 0;
  double success_rate = 0.0;
  double rel_error_median = 0.0;
  double rel_error_p90 = 0.0;
  double rel_error_max = 0.0;
  double abs_error_median = 0.0;
  double mean_max_edge_bits = 0.0;
  std::size_t max_max_edge_bits = 0;
  double mean_total_bits = 0.0;
  double mean_rounds = 0.0;
  /// Acceptance threshold on success_rate for this protocol.
  double threshold = 0.0;
  bool meets_threshold = false;
  double wall_seconds = 0.0;
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::vector<TrialReport> trials;
  Summary summary;
};

/// Thread count from MPSKETCH_THREADS (default 1).
std::size_t threads_from_env();

/// Success-rate threshold enforced under --check.
double acceptance_threshold(Protocol p);

/// One trial. Data come from derive_seed(seed, {kData, trial}), protocol
/// randomness from derive_seed(seed, {kTrial, trial}); the result is a pure
/// function of (spec, trial).
TrialReport run_trial(const ExperimentSpec& spec, std::size_t trial,
                      bool timing = false);

/// All trials, spread over `threads` workers (0: threads_from_env()).
/// Reports are ordered by trial so the output never depends on scheduling.
ExperimentResult run_experiment(const ExperimentSpec& spec,
                                std::size_t threads = 0, bool timing = false);

Summary summarize(const std::vector<TrialReport>& trials, double threshold);

}  // namespace mpsketch::harness
