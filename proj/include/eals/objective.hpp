#pragma once

#include "eals/factor_model.hpp"
#include "eals/sparse_matrix.hpp"
#include "eals/weight_model.hpp"

namespace eals {

// Reference evaluation of the weighted squared loss by an explicit double
// loop over all cells: observed cells contribute c_ui (r_ui - phat)^2,
// missing cells (a_u . b_i) phat^2, plus lambda (||P||^2 + ||Q||^2).
// Predictions are recomputed from the factors, never read from the cache, so
// this stays a valid oracle when the cache has drifted.
double objective_direct(const SparseRatingMatrix& data, const MissingWeightModel& weights,
                        const FactorModel& model, double lambda);

}  // namespace eals
