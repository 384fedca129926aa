#include "mpsketch/data.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

#include "mpsketch/errors.hpp"

namespace mpsketch {

std::uint64_t SparseVector::max_value() const noexcept {
  return value.empty() ? 0 : *std::max_element(value.begin(), value.end());
}

std::vector<std::uint64_t> SparseVector::to_dense() const {
  std::vector<std::uint64_t> out(dim, 0);
  for (std::size_t t = 0; t < index.size(); ++t) out[index[t]] = value[t];
  return out;
}

void SparseVector::validate() const {
  if (index.size() != value.size()) {
    throw ParameterError("sparse vector index/value length mismatch");
  }
  if (dim > std::numeric_limits<std::uint32_t>::max()) {
    throw ParameterError("sparse vector dimension exceeds 2^32");
  }
  for (std::size_t t = 0; t < index.size(); ++t) {
    if (index[t] >= dim) throw ParameterError("sparse index out of range");
    if (t > 0 && index[t] <= index[t - 1]) {
      throw ParameterError("sparse indices must be strictly increasing");
    }
    if (value[t] == 0) throw ParameterError("sparse values must be non-zero");
  }
}

SparseVector SparseVector::from_dense(const std::vector<std::uint64_t>& dense) {
  SparseVector v;
  v.dim = dense.size();
  for (std::size_t j = 0; j < dense.size(); ++j) {
    if (dense[j] != 0) {
      v.index.push_back(static_cast<std::uint32_t>(j));
      v.value.push_back(dense[j]);
    }
  }
  return v;
}

std::uint64_t SparseMatrix::max_value() const noexcept {
  std::uint64_t best = 0;
  for (const Entry& e : entries) best = std::max(best, e.value);
  return best;
}

std::vector<std::uint64_t> SparseMatrix::to_dense() const {
  std::vector<std::uint64_t> out(rows * cols, 0);
  for (const Entry& e : entries) out[e.row * cols + e.col] = e.value;
  return out;
}

void SparseMatrix::validate() const {
  for (std::size_t t = 0; t < entries.size(); ++t) {
    const Entry& e = entries[t];
    if (e.row >= rows || e.col >= cols) {
      throw ParameterError("sparse matrix entry out of range");
    }
    if (e.value == 0) throw ParameterError("sparse values must be non-zero");
    if (t > 0) {
      const Entry& prev = entries[t - 1];
      if (std::tie(prev.row, prev.col) >= std::tie(e.row, e.col)) {
        throw ParameterError("sparse matrix entries must be sorted, unique");
      }
    }
  }
}

SparseMatrix SparseMatrix::from_dense(std::size_t rows, std::size_t cols,
                                      const std::vector<std::uint64_t>& dense) {
  if (dense.size() != rows * cols) {
    throw ParameterError("dense matrix size does not match shape");
  }
  SparseMatrix m;
  m.rows = rows;
  m.cols = cols;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (const std::uint64_t v = dense[r * cols + c]; v != 0) {
        m.entries.push_back({static_cast<std::uint32_t>(r),
                             static_cast<std::uint32_t>(c), v});
      }
    }
  }
  return m;
}

std::size_t common_dim(const VectorInputs& inputs) {
  if (inputs.empty()) throw ParameterError("at least one player is required");
  const std::size_t n = inputs.front().dim;
  for (const SparseVector& v : inputs) {
    if (v.dim != n) throw ParameterError("players disagree on dimension n");
  }
  return n;
}

std::vector<std::uint64_t> aggregate(const VectorInputs& inputs) {
  std::vector<std::uint64_t> total(common_dim(inputs), 0);
  for (const SparseVector& v : inputs) {
    for (std::size_t t = 0; t < v.nnz(); ++t) total[v.index[t]] += v.value[t];
  }
  return total;
}

std::vector<std::uint64_t> aggregate(const MatrixInputs& inputs) {
  if (inputs.empty()) throw ParameterError("at least one player is required");
  const std::size_t rows = inputs.front().rows;
  const std::size_t cols = inputs.front().cols;
  std::vector<std::uint64_t> total(rows * cols, 0);
  for (const SparseMatrix& m : inputs) {
    if (m.rows != rows || m.cols != cols) {
      throw ParameterError("players disagree on matrix shape");
    }
    for (const auto& e : m.entries) total[e.row * cols + e.col] += e.value;
  }
  return total;
}

std::uint64_t max_entry(const VectorInputs& inputs) noexcept {
  std::uint64_t best = 1;
  for (const SparseVector& v : inputs) best = std::max(best, v.max_value());
  return best;
}

std::uint64_t max_entry(const MatrixInputs& inputs) noexcept {
  std::uint64_t best = 1;
  for (const SparseMatrix& m : inputs) best = std::max(best, m.max_value());
  return best;
}

}  // namespace mpsketch
