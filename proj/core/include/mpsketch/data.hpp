#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mpsketch {

/// Non-negative integer vector of dimension `dim`, stored sparsely. Indices
/// are strictly increasing and values are non-zero.
struct SparseVector {
  std::size_t dim = 0;
  std::vector<std::uint32_t> index;
  std::vector<std::uint64_t> value;

  std::size_t nnz() const noexcept { return index.size(); }
  bool empty() const noexcept { return index.empty(); }
  std::uint64_t max_value() const noexcept;
  std::vector<std::uint64_t> to_dense() const;

  /// Throws ParameterError when the representation invariants fail.
  void validate() const;

  static SparseVector from_dense(const std::vector<std::uint64_t>& dense);

  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

/// Non-negative integer rows x cols matrix as (row, col, value) triplets
/// sorted by (row, col), values non-zero.
struct SparseMatrix {
  struct Entry {
    std::uint32_t row;
    std::uint32_t col;
    std::uint64_t value;
    friend bool operator==(const Entry&, const Entry&) = default;
  };
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Entry> entries;

  bool empty() const noexcept { return entries.empty(); }
  std::uint64_t max_value() const noexcept;
  /// Row-major dense copy.
  std::vector<std::uint64_t> to_dense() const;
  void validate() const;

  static SparseMatrix from_dense(std::size_t rows, std::size_t cols,
                                 const std::vector<std::uint64_t>& dense);

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;
};

/// Player inputs; one entry per vertex.
using VectorInputs = std::vector<SparseVector>;
using MatrixInputs = std::vector<SparseMatrix>;

/// Exact aggregate sum over players. Throws ParameterError when dimensions
/// disagree or the list is empty.
std::vector<std::uint64_t> aggregate(const VectorInputs& inputs);
std::vector<std::uint64_t> aggregate(const MatrixInputs& inputs);

/// The bound M on input entries: max over players, at least 1.
std::uint64_t max_entry(const VectorInputs& inputs) noexcept;
std::uint64_t max_entry(const MatrixInputs& inputs) noexcept;

/// Common dimension of the players' vectors (ParameterError if mixed).
std::size_t common_dim(const VectorInputs& inputs);

}  // namespace mpsketch
