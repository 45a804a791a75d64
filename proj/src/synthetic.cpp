#include "eals/synthetic.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_set>

namespace eals {

SparseRatingMatrix synthetic_matrix(std::size_t rows, std::size_t cols, double density,
                                    std::uint64_t seed) {
  if (rows == 0 || cols == 0) {
    throw std::invalid_argument("synthetic_matrix: dimensions must be positive");
  }
  if (!(density > 0.0) || density > 1.0) {
    throw std::invalid_argument("synthetic_matrix: density must be in (0, 1]");
  }
  const double cells = static_cast<double>(rows) * static_cast<double>(cols);
  const auto target = static_cast<std::size_t>(
      std::max<double>(1.0, std::llround(density * cells)));

  std::mt19937_64 rng(seed);
  std::unordered_set<std::uint64_t> taken;
  taken.reserve(target * 2);
  std::vector<Entry> entries;
  entries.reserve(target);
  while (entries.size() < target) {
    const auto u = static_cast<std::uint32_t>(rng() % rows);
    const auto i = static_cast<std::uint32_t>(rng() % cols);
    const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | i;
    if (!taken.insert(key).second) continue;
    const double rating = static_cast<double>(1 + rng() % 5);
    entries.push_back(Entry{u, i, rating, 1.0});
  }
  return SparseRatingMatrix(rows, cols, std::move(entries));
}

}  // namespace eals
