#pragma once

#include <cstddef>
#include <vector>

#include "eals/hyperparams.hpp"
#include "eals/matrix.hpp"
#include "eals/sparse_matrix.hpp"

namespace eals {

// Latent factor matrices plus the per-observed-entry prediction cache. The
// cache is keyed by entry id of the matrix it was built against and is kept
// consistent by the solvers after every coordinate step.
struct FactorModel {
  Matrix p;                  // num_rows x k
  Matrix q;                  // num_cols x k
  std::vector<double> rhat;  // prediction cache aligned with entry ids

  std::size_t num_rows() const { return p.rows(); }
  std::size_t num_cols() const { return q.rows(); }
  std::size_t rank() const { return p.cols(); }
};

// Inner product of row and column factors. Throws std::out_of_range on bad
// indices.
double predict(const FactorModel& model, std::size_t u, std::size_t i);

// Gaussian(0, init_stddev) factors from hp.seed, with a fresh prediction
// cache.
FactorModel init_factor_model(const SparseRatingMatrix& data, const Hyperparams& hp);

// Explicit factors (seeding equivalence runs); the cache is rebuilt.
FactorModel init_factor_model(const SparseRatingMatrix& data, Matrix p, Matrix q);

// Recomputes the cache from scratch for every observed entry.
void rhat_rebuild(const SparseRatingMatrix& data, FactorModel& model);

// Max relative drift between the cache and freshly computed predictions,
// max_e |rhat[e] - p_u . q_i| / (1 + |rhat[e]|).
double max_rhat_drift(const SparseRatingMatrix& data, const FactorModel& model);

}  // namespace eals
