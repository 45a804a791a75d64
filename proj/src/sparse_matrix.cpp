#include "eals/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eals/errors.hpp"

namespace eals {

SparseRatingMatrix::SparseRatingMatrix(std::size_t num_rows, std::size_t num_cols,
                                       std::vector<Entry> entries)
    : num_rows_(num_rows), num_cols_(num_cols), entries_(std::move(entries)) {
  if (num_rows_ == 0 || num_cols_ == 0) {
    throw DataError("sparse matrix: dimensions must be positive");
  }
  if (num_rows_ > std::numeric_limits<std::uint32_t>::max() ||
      num_cols_ > std::numeric_limits<std::uint32_t>::max()) {
    throw DataError("sparse matrix: dimensions exceed 32-bit index range");
  }
  for (const Entry& e : entries_) {
    if (e.row >= num_rows_ || e.col >= num_cols_) {
      throw DataError("sparse matrix: entry (" + std::to_string(e.row) + ", " +
                      std::to_string(e.col) + ") out of bounds");
    }
    if (!std::isfinite(e.value) || !std::isfinite(e.weight)) {
      throw DataError("sparse matrix: non-finite value or weight at (" +
                      std::to_string(e.row) + ", " + std::to_string(e.col) + ")");
    }
    if (e.weight < 0.0) {
      throw DataError("sparse matrix: negative weight at (" + std::to_string(e.row) +
                      ", " + std::to_string(e.col) + ")");
    }
  }

  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (std::size_t id = 1; id < entries_.size(); ++id) {
    if (entries_[id].row == entries_[id - 1].row && entries_[id].col == entries_[id - 1].col) {
      throw DataError("sparse matrix: duplicate entry (" + std::to_string(entries_[id].row) +
                      ", " + std::to_string(entries_[id].col) + ")");
    }
  }

  row_ptr_.assign(num_rows_ + 1, 0);
  for (const Entry& e : entries_) ++row_ptr_[e.row + 1];
  for (std::size_t u = 0; u < num_rows_; ++u) row_ptr_[u + 1] += row_ptr_[u];

  col_ptr_.assign(num_cols_ + 1, 0);
  for (const Entry& e : entries_) ++col_ptr_[e.col + 1];
  for (std::size_t i = 0; i < num_cols_; ++i) col_ptr_[i + 1] += col_ptr_[i];

  col_ids_.resize(entries_.size());
  std::vector<std::size_t> cursor(col_ptr_.begin(), col_ptr_.end() - 1);
  for (std::size_t id = 0; id < entries_.size(); ++id) {
    col_ids_[cursor[entries_[id].col]++] = static_cast<std::uint32_t>(id);
  }
}

}  // namespace eals
