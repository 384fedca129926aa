#pragma once

#include <string>

#include "mpsketch/harness/experiment.hpp"

namespace mpsketch::harness {

/// Bumped whenever the CSV columns change.
inline constexpr int kCsvSchemaVersion = 1;

/// One row per trial. Columns: schema_version, protocol, trial, estimate,
/// exact, rel_error, abs_error, success, max_edge_bits, total_bits, rounds,
/// plus wall_seconds when `timing`. Reals print with 17 significant digits.
std::string to_csv(const ExperimentResult& result, bool timing = false);

/// Spec echo plus summary statistics, as pretty-printed JSON.
std::string summary_json(const ExperimentResult& result, bool timing = false);

/// All trials and the summary in one JSON document.
std::string to_json(const ExperimentResult& result, bool timing = false);

/// Writes `text` to `path`; Error names the path on failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace mpsketch::harness
