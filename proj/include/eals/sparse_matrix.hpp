#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace eals {

// One observed cell: value r_ui with per-entry confidence weight c_ui >= 0.
struct Entry {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  double value = 0.0;
  double weight = 1.0;
};

// Immutable sparse matrix of observed entries with dual row/column indexing.
// Entries are canonicalized to row-major order at construction, so the entry
// ids of one row form a contiguous range and the prediction cache aligned to
// entry ids enjoys the same locality. The column index is a flat list of
// entry ids per column. Both solver phases mutate the one cache cell that a
// given (u, i) owns, regardless of which index reached it.
class SparseRatingMatrix {
 public:
  // Validates bounds, finiteness, weight nonnegativity and (u, i) uniqueness;
  // duplicates are an error, not last-wins.
  SparseRatingMatrix(std::size_t num_rows, std::size_t num_cols, std::vector<Entry> entries);

  std::size_t num_rows() const { return num_rows_; }
  std::size_t num_cols() const { return num_cols_; }
  std::size_t num_observed() const { return entries_.size(); }

  std::span<const Entry> entries() const { return entries_; }
  const Entry& entry(std::size_t id) const { return entries_[id]; }

  // Entries of row u in ascending column order; contiguous in entry-id space.
  std::span<const Entry> row_entries(std::size_t u) const {
    return {entries_.data() + row_ptr_[u], row_ptr_[u + 1] - row_ptr_[u]};
  }
  // First entry id of row u; id of row_entries(u)[j] is this + j.
  std::size_t row_entry_begin(std::size_t u) const { return row_ptr_[u]; }

  // Entry ids of column i in ascending row order.
  std::span<const std::uint32_t> col_entry_ids(std::size_t i) const {
    return {col_ids_.data() + col_ptr_[i], col_ptr_[i + 1] - col_ptr_[i]};
  }

 private:
  std::size_t num_rows_ = 0;
  std::size_t num_cols_ = 0;
  std::vector<Entry> entries_;          // sorted by (row, col)
  std::vector<std::size_t> row_ptr_;    // size num_rows + 1
  std::vector<std::size_t> col_ptr_;    // size num_cols + 1
  std::vector<std::uint32_t> col_ids_;  // entry ids grouped by column
};

}  // namespace eals
