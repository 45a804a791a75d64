#pragma once

#include "eals/sparse_matrix.hpp"
#include "eals/train_types.hpp"

namespace eals {

// Exact element-wise ALS over all cells of the matrix, O(M N K) per sweep.
// This solver exists as the deterministic correctness oracle for the fast
// solver; it is single-threaded by definition.

// Sets p_uf to its closed-form minimizer by looping over every column
// (missing cells weighted by the model, target 0), updates the prediction
// cache for the observed entries of row u, and returns the new value.
double update_p_element_direct(const SparseRatingMatrix& data, const MissingWeightModel& weights,
                               FactorModel& model, std::size_t u, std::size_t f, double lambda);

// Mirror update for q_if over every row.
double update_q_element_direct(const SparseRatingMatrix& data, const MissingWeightModel& weights,
                               FactorModel& model, std::size_t i, std::size_t f, double lambda);

// Full P sweep then full Q sweep per iteration (factor index innermost),
// with the direct objective recorded after each iteration.
TrainResult train_vanilla(const SparseRatingMatrix& data, const MissingWeightModel& weights,
                          const Hyperparams& hp, const TrainOptions& options = {});

}  // namespace eals
