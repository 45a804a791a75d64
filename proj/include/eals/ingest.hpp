#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "eals/sparse_matrix.hpp"

namespace eals {

// One parsed log line, ids still in their original string form.
struct RawRating {
  std::string user;
  std::string item;
  double rating = 0.0;
  std::optional<std::int64_t> timestamp;
  std::optional<double> weight;  // per-entry observed weight, when a column provides one
  std::size_t line = 0;          // 1-based source line, for error reporting
};

// Lines are `user<sep>item<sep>rating[<sep>timestamp[<sep>weight]]` with the
// separator (tab, comma or space) detected per line; `#` lines are comments.
// Malformed lines, non-numeric fields and duplicate (user, item) pairs are
// errors carrying the line number.
std::vector<RawRating> parse_ratings(const std::filesystem::path& path);

// Dense 0-based ids in first-occurrence order.
struct IdMaps {
  std::vector<std::string> users;
  std::vector<std::string> items;
  std::unordered_map<std::string, std::size_t> user_index;
  std::unordered_map<std::string, std::size_t> item_index;

  std::size_t user_id(const std::string& user);  // assigns on first sight
  std::size_t item_id(const std::string& item);
};

struct BuildOptions {
  bool binarize = false;          // r_ui = 1 for every observed entry
  double default_weight = 1.0;    // c_ui when no weight column is present
};

struct BuiltMatrix {
  SparseRatingMatrix matrix;
  IdMaps maps;
};

// Compacts ids and assembles the sparse matrix. A zero rating without
// binarization is an error: zero is reserved for missing cells.
BuiltMatrix build_matrix(const std::vector<RawRating>& raw, const BuildOptions& options = {});

struct DatasetStats {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t observed = 0;
  double sparsity = 0.0;                 // 1 - |R| / (M N)
  std::vector<std::size_t> item_counts;  // |R_i| per column; feeds popularity weighting
};

DatasetStats dataset_stats(const SparseRatingMatrix& data);

}  // namespace eals
