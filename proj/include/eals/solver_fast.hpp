#pragma once

#include <vector>

#include "eals/cache_tensor.hpp"
#include "eals/sparse_matrix.hpp"
#include "eals/train_types.hpp"

namespace eals {

// Cache-accelerated element-wise ALS. Per iteration the cost is
// O((M + N) K^2 Z + |R| K Z): the missing-data sums of each coordinate
// update are answered by the S^q / S^p tensors plus corrections over the
// row's (column's) observed entries. The algebra is exact, so with one
// thread the iterates coincide with the vanilla solver's.

// Reusable per-row work buffers so the hot loops never allocate.
struct RowScratch {
  std::vector<double> weight_dots;    // a_u . b_i per observed entry
  std::vector<double> factor_column;  // gathered q_if (p_uf) per observed entry
};

// Updates every element of row u of P in factor order against a current S^q;
// touches only p_u and the cached predictions of row u's entries, so disjoint
// rows can run concurrently.
void update_p_row(const SparseRatingMatrix& data, const MissingWeightModel& weights,
                  FactorModel& model, const CacheTensor& sq, std::size_t u, double lambda,
                  RowScratch& scratch);
void update_p_row(const SparseRatingMatrix& data, const MissingWeightModel& weights,
                  FactorModel& model, const CacheTensor& sq, std::size_t u, double lambda);

// Mirror update for column i of Q against a current S^p.
void update_q_col(const SparseRatingMatrix& data, const MissingWeightModel& weights,
                  FactorModel& model, const CacheTensor& sp, std::size_t i, double lambda,
                  RowScratch& scratch);
void update_q_col(const SparseRatingMatrix& data, const MissingWeightModel& weights,
                  FactorModel& model, const CacheTensor& sp, std::size_t i, double lambda);

// Objective value in O(M K^2 Z + |R| (K + Z)): the observed term from the
// prediction cache, the missing term from S^q minus the observed correction.
// Requires sq built from the model's current Q.
double objective_fast(const SparseRatingMatrix& data, const MissingWeightModel& weights,
                      const FactorModel& model, const CacheTensor& sq, double lambda,
                      unsigned threads = 1);

// Per iteration: S^q build, P phase, S^p build, Q phase, then a fresh S^q
// feeding both the objective and the next iteration. Phases parallelize over
// disjoint rows/columns; caches and objective sums are ordered parallel
// reductions, the only place where the thread count can shift float
// round-off.
TrainResult train_fast(const SparseRatingMatrix& data, const MissingWeightModel& weights,
                       const Hyperparams& hp, const TrainOptions& options = {},
                       unsigned threads = 1);

}  // namespace eals
