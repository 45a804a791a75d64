#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "eals/matrix.hpp"
#include "eals/sparse_matrix.hpp"

namespace eals {

// Low-rank model of the weights placed on missing cells: the weight of a
// missing (u, i) is the inner product of row factor a_u and column factor
// b_i. Rank 1 covers the uniform, popularity and user-oriented schemes; any
// explicit weight matrix can be approximated via truncated_svd.
class MissingWeightModel {
 public:
  // certified_nonnegative: caller guarantees a_u . b_i >= 0 for all cells.
  // The closed-form constructors below certify by construction; use
  // make_weight_model for factors of unknown sign.
  MissingWeightModel(Matrix row_factors, Matrix col_factors, bool certified_nonnegative);

  std::size_t rank() const { return row_factors_.cols(); }
  std::size_t num_rows() const { return row_factors_.rows(); }
  std::size_t num_cols() const { return col_factors_.rows(); }

  std::span<const double> row_factor(std::size_t u) const { return row_factors_.row(u); }
  std::span<const double> col_factor(std::size_t i) const { return col_factors_.row(i); }
  double weight(std::size_t u, std::size_t i) const {
    return dot(row_factors_.row(u), col_factors_.row(i));
  }

  const Matrix& row_factors() const { return row_factors_; }
  const Matrix& col_factors() const { return col_factors_; }
  bool certified_nonnegative() const { return certified_nonnegative_; }

 private:
  Matrix row_factors_;  // M x Z
  Matrix col_factors_;  // N x Z
  bool certified_nonnegative_ = false;
};

// Certifies elementwise-nonnegative factors directly; otherwise scans every
// cell when the matrix is desk-scale, and leaves the model uncertified when
// it is too large to scan.
MissingWeightModel make_weight_model(Matrix row_factors, Matrix col_factors);

// Same weight c0 on every missing cell (rank 1: a_u = [c0], b_i = [1]).
MissingWeightModel uniform_missing(std::size_t num_rows, std::size_t num_cols, double c0);

// Item-popularity weights: a_u = [c0], b_i = [f_i^alpha / sum_j f_j^alpha]
// where f_i is item i's share of observed entries. Items unseen in training
// get b_i = 0 for alpha > 0 and are an error for alpha < 0.
MissingWeightModel popularity_missing(const SparseRatingMatrix& data, double c0, double alpha);

// Per-row weights: a_u = [per_row_weight[u]], b_i = [1].
MissingWeightModel user_oriented_missing(const SparseRatingMatrix& data,
                                         std::span<const double> per_row_weight);

struct TruncatedSvdResult {
  MissingWeightModel model;
  double residual;                        // ||W - A B^T||_F
  std::optional<std::size_t> exact_rank;  // set when the residual is ~0
};

// Top-`rank` singular triplets of a dense desk-scale matrix by power
// iteration with deflation; factors are split symmetrically as
// A = U sqrt(S), B = V sqrt(S).
TruncatedSvdResult truncated_svd(const Matrix& w, std::size_t rank);

}  // namespace eals
