#pragma once

#include <cstdint>

#include "eals/sparse_matrix.hpp"

namespace eals {

// Seeded random sparse matrix: round(density * rows * cols) distinct cells
// (at least one), ratings uniform in {1..5}, observed weight 1. Identical
// output for identical arguments on any platform.
SparseRatingMatrix synthetic_matrix(std::size_t rows, std::size_t cols, double density,
                                    std::uint64_t seed);

}  // namespace eals
