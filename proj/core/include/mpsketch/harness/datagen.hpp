#pragma once

// Synthetic and file-backed inputs. Generators build the aggregate first,
// then split each coordinate's units uniformly at random among players.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mpsketch/data.hpp"
#include "mpsketch/fp_low.hpp"

namespace mpsketch::harness {

/// Parsed distribution spec:
///   zipf:s           `items` draws from P(i) proportional to (i+1)^-s over [n]
///   uniform:v        every coordinate equals v
///   sparse:d         each coordinate non-zero w.p. d, value uniform in 1..10
///   planted:V:C      C coordinates (random positions) equal V, the rest 1
///   values:a,b,...   explicit aggregate, zero padded to n
///   file:PATH        whitespace separated non-negative integers
struct DistSpec {
  enum class Kind { kZipf, kUniform, kSparse, kPlanted, kValues, kFile };
  Kind kind = Kind::kZipf;
  double param = 1.1;
  std::uint64_t planted_value = 0;
  std::size_t planted_count = 0;
  std::vector<std::uint64_t> values;
  std::string path;
  std::string text;  // the original spec
};

/// Throws ParameterError on malformed specs and Error on unreadable files.
DistSpec parse_dist(const std::string& spec);

/// Aggregate of dimension n (files and value lists may not exceed n).
/// `items` is used by zipf only.
std::vector<std::uint64_t> generate_aggregate(const DistSpec& dist,
                                              std::size_t n, std::size_t items,
                                              std::uint64_t seed);

/// Splits every unit of the aggregate to a uniform random player. Entries
/// above 2^20 are split as an even share plus a random remainder so huge
/// values stay cheap. The players' vectors sum to `agg` exactly.
VectorInputs split_among_players(const std::vector<std::uint64_t>& agg,
                                 std::size_t m, std::uint64_t seed);

/// Spreads `inputs` (one per holder) over m vertices: holder j sits at
/// vertex floor((j + 1/2) m / holders); other vertices get empty vectors.
VectorInputs place_holders(VectorInputs inputs, std::size_t m);
MatrixInputs place_holders(MatrixInputs inputs, std::size_t m);

/// Row-major n x t aggregate; each column is an independent draw of `dist`.
std::vector<std::uint64_t> generate_matrix(const DistSpec& dist, std::size_t n,
                                           std::size_t t, std::size_t items,
                                           std::uint64_t seed);

/// Dense matrix text file: header "n t", then n*t row-major values.
std::vector<std::uint64_t> read_matrix_file(const std::string& path,
                                            std::size_t& n, std::size_t& t);

MatrixInputs split_matrix_among_players(const std::vector<std::uint64_t>& agg,
                                        std::size_t n, std::size_t t,
                                        std::size_t m, std::uint64_t seed);

/// Insertion-only unit-update stream: for zipf, `items` i.i.d. draws;
/// otherwise the units of the aggregate in a uniformly random order.
std::vector<StreamUpdate> generate_stream(const DistSpec& dist, std::size_t n,
                                          std::size_t items,
                                          std::uint64_t seed);

/// Stream file: one "i delta" pair per line, '#' comments allowed.
std::vector<StreamUpdate> read_stream_file(const std::string& path);

/// Exact aggregate of a stream.
std::vector<std::uint64_t> stream_aggregate(
    const std::vector<StreamUpdate>& updates, std::size_t n);

}  // namespace mpsketch::harness
